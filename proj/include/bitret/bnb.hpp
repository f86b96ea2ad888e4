#pragma once

#include "bitret/core.hpp"
#include "bitret/projections.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace bitret {

struct EllipsoidConfig {
  // Values <= 0 select the defaults noted on each field.
  double initial_radius = 0;     // sqrt(d) (1 + facet_thickness) + 2 r
  double min_volume_radius = 0;  // r = min(facet_thickness, relax_slack sqrt(n)) / 2
  std::uint64_t max_iters = 0;   // 2 d (d + 1) ln(initial_radius / r) + 100
  double facet_thickness = 1e-3;
  double relax_slack = 1e-3;
  int fast_path_iters = 50;

  // Magnitude weakening radius, twice the volume radius.
  double weakening_radius(int n) const;
  double volume_radius(int n) const;
};

struct NodeResult {
  int depth = 0;
  std::vector<int> prefix;
  bool feasible = false;
  std::uint64_t ellipsoid_iters = 0;
  bool fast_path = false;
  std::optional<RealVector> witness;
};

// E = {c + Q^(1/2) u : |u| <= 1}; log_det tracks log det Q, so the volume
// ratio of two ellipsoids is exp(delta log_det / 2).
struct Ellipsoid {
  Ellipsoid(int dim, double radius);

  // Keeps the part of E with a.x <= b (deep cut when the center violates it
  // by more than zero). Returns false when no part of E satisfies the cut.
  bool cut(const RealVector& a, double b);
  void symmetrize();

  RealVector center;
  Eigen::MatrixXd shape;
  double log_det = 0;
};

// Feasibility of the weakened relaxed magnitude set intersected with the
// thickened facet. The ellipsoid runs in the free coordinates with the fixed
// prefix held at its signs and uses deep cuts from the separation oracle.
// Infeasible is declared when a cut removes the whole ellipsoid or its
// volume drops below that of a ball of radius r.
NodeResult ellipsoid_feasible(const ConstraintGeometry& g, const Facet& f, const EllipsoidConfig& config = {});

// Decides feasibility of a sign prefix for an instance; builds the weakened
// geometry and thickened facet from the config.
class NodeEvaluator {
 public:
  NodeEvaluator(const Instance& instance, const EllipsoidConfig& config = {});
  NodeResult evaluate(const std::vector<int>& prefix) const;
  const ConstraintGeometry& geometry() const { return weakened_; }

 private:
  ConstraintGeometry base_;
  ConstraintGeometry weakened_;
  EllipsoidConfig config_;
};

struct BnbResult {
  bool solved = false;
  std::optional<SignSequence> solution;
  std::uint64_t nodes = 0;
  std::vector<std::uint64_t> nodes_per_depth;
  std::uint64_t ellipsoid_iters = 0;
  double wall_ms = 0;
};

struct BnbConfig {
  EllipsoidConfig ellipsoid;
  std::uint64_t max_nodes = std::numeric_limits<std::uint64_t>::max();
  // Collect every verified leaf instead of stopping at the first.
  bool enumerate_all = false;
};

// Depth-first search over sign prefixes with x_0 = +1, +1 child first.
// Leaves are checked with the exact verifier.
BnbResult branch_and_bound(const Instance& instance, const BnbConfig& config = {},
                           std::vector<SignSequence>* all_solutions = nullptr);

struct TreeWidthProfile {
  int n = 0;
  std::vector<int> depths;
  std::vector<double> p_feasible;
  std::vector<double> w;  // -infinity where no sample was feasible
  int samples_per_depth = 0;
};

TreeWidthProfile tree_width_profile(const Instance& instance, const std::vector<int>& depths, int samples_per_depth,
                                    std::uint64_t seed, const EllipsoidConfig& config = {}, int jobs = 1);

// Checks the weakened inequalities directly: |x^_q|^2 <= bound_q + tol and
// the facet box.
bool witness_satisfies(const RealVector& x, const ConstraintGeometry& weakened, const Facet& f, double tol = 1e-9);

}  // namespace bitret
