#pragma once

#include "bitret/core.hpp"
#include "bitret/spectral.hpp"

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace bitret {

// Fourier-magnitude constraint set. With relaxed = false the set is
// |x^_q|^2 = target_q; with relaxed = true it is |x^_q|^2 <= target_q + eta.
struct ConstraintGeometry {
  int n = 0;
  RealVector targets;  // q = 0..n/2, clamped to >= 0
  double eta = 0;
  bool relaxed = false;

  static ConstraintGeometry from_magnitudes(const MagnitudeData& m, double eta = 0, bool relaxed = false);
  // Exact: eta = 0. Noisy: eta = 2(n-1)/n, the largest shift one noise
  // pattern can cause. FixedPrecision: the instance eta.
  static ConstraintGeometry from_instance(const Instance& instance, bool relaxed = false);

  // Relaxed copy whose magnitude bounds grow by `radius`:
  // bound_q = (sqrt(target_q + eta) + radius)^2, eta = 0. Every point within
  // distance radius of the unweakened relaxed set lies inside.
  ConstraintGeometry weakened(double radius) const;
  double bound(int q) const { return relaxed ? targets[q] + eta : targets[q]; }
};

// Consecutive sign prefix x_0..x_{K-1} fixed; remaining coordinates in
// [-1,1]. A positive thickness widens both the fixed values and the box by
// that amount.
struct Facet {
  int n = 0;
  std::vector<int> fixed;
  double thickness = 0;

  int depth() const { return static_cast<int>(fixed.size()); }
};

struct Hyperplane {
  RealVector normal;  // unit length
  double offset = 0;  // feasible points y satisfy normal . y <= offset
};

struct OracleResult {
  bool in_both = false;
  Hyperplane plane;
  double dist_relaxed = 0;
  double dist_facet = 0;
};

// Projections onto the magnitude sets, reusing transform scratch between
// calls. One instance per worker thread. Small n uses dense cosine and sine
// matrices; larger n uses the FFT plan.
template <typename Scalar = double>
class ConstraintProjector {
 public:
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  explicit ConstraintProjector(const ConstraintGeometry& g);

  const ConstraintGeometry& geometry() const { return geometry_; }
  int size() const { return n_; }

  // Nearest point with |y^_q|^2 = target_q; a zero bin takes phase +1.
  void project(const Vec& x, Vec& out);
  // Nearest point with |y^_q|^2 <= bound_q; satisfied bins are untouched.
  void project_relaxed(const Vec& x, Vec& out);
  // Half-spectrum squared magnitudes of x.
  Vec sq_magnitudes(const Vec& x);

 private:
  void analyze(const Vec& x);
  void synthesize(Vec& out);

  ConstraintGeometry geometry_;
  int n_;
  int half_;
  bool dense_;
  Mat fwd_;  // cosine rows over sine rows, scaled by n^{-1/2}
  Mat inv_;  // n x 2 half, with Hermitian weights
  Vec spec_;
  Vec re_, im_, bound_, root_targets_;
  std::shared_ptr<const FourierPlan<Scalar>> plan_;
  typename FourierPlan<Scalar>::ComplexVec buffer_;
};

extern template class ConstraintProjector<double>;

// sign(0) = +1.
SignSequence project_B(const RealVector& x);
RealVector project_B_real(const RealVector& x);
RealVector project_A(const RealVector& x, const ConstraintGeometry& g);
RealVector project_A_relaxed(const RealVector& x, const ConstraintGeometry& g);
RealVector project_facet(const RealVector& x, const Facet& f);

// Projection-based separation for repeated queries against one geometry and
// facet.
class SeparationOracle {
 public:
  SeparationOracle(const ConstraintGeometry& g, const Facet& f, double tol = 1e-9);
  OracleResult query(const RealVector& x);
  bool contains(const RealVector& x);
  const Facet& facet() const { return facet_; }

 private:
  ConstraintProjector<double> projector_;
  Facet facet_;
  double tol_;
  RealVector pa_, pf_;
};

// Membership within tol of both sets, or the hyperplane through the farther
// projection p with normal (x - p) / |x - p|.
OracleResult separation_oracle(const RealVector& x, const ConstraintGeometry& g, const Facet& f, double tol = 1e-9);

}  // namespace bitret
