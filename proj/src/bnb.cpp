#include "bitret/bnb.hpp"

#include "bitret/parallel.hpp"
#include "bitret/random.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace bitret {

double EllipsoidConfig::weakening_radius(int n) const {
  if (min_volume_radius > 0) return 2 * min_volume_radius;
  return std::min(facet_thickness, relax_slack * std::sqrt(double(n)));
}

double EllipsoidConfig::volume_radius(int n) const {
  return min_volume_radius > 0 ? min_volume_radius : weakening_radius(n) / 2;
}

namespace {

RealVector assemble(const Facet& f, const RealVector& free) {
  RealVector x(f.n);
  for (int k = 0; k < f.depth(); ++k) x[k] = f.fixed[k];
  x.tail(f.n - f.depth()) = free;
  return x;
}

}  // namespace

bool witness_satisfies(const RealVector& x, const ConstraintGeometry& weakened, const Facet& f, double tol) {
  if (x.size() != weakened.n) return false;
  const MagnitudeData m = magnitudes_of(x);
  for (int q = 0; q <= weakened.n / 2; ++q)
    if (m.sq[q] > weakened.bound(q) + tol) return false;
  for (int k = 0; k < f.n; ++k) {
    if (k < f.depth()) {
      if (std::abs(x[k] - f.fixed[k]) > f.thickness + tol) return false;
    } else if (std::abs(x[k]) > 1 + f.thickness + tol) {
      return false;
    }
  }
  return true;
}

Ellipsoid::Ellipsoid(int dim, double radius)
    : center(RealVector::Zero(dim)),
      shape(Eigen::MatrixXd::Identity(dim, dim) * (radius * radius)),
      log_det(2.0 * dim * std::log(radius)) {
  if (dim < 2) throw std::invalid_argument("Ellipsoid: dimension must be at least 2");
}

bool Ellipsoid::cut(const RealVector& a, double b) {
  const double dd = static_cast<double>(center.size());
  RealVector Qa = shape * a;
  const double s2 = a.dot(Qa);
  if (!(s2 > 1e-300)) return false;
  const double s = std::sqrt(s2);
  const double alpha = (a.dot(center) - b) / s;
  if (alpha >= 1) return false;
  // alpha < 0 would be a shallow cut; the oracle only returns violated planes.
  const double depth = std::max(alpha, 0.0);
  const double tau = (1 + dd * depth) / (dd + 1);
  const double sigma = 2 * (1 + dd * depth) / ((dd + 1) * (1 + depth));
  const double delta = dd * dd * (1 - depth * depth) / (dd * dd - 1);
  Qa /= s;
  center -= tau * Qa;
  shape -= sigma * Qa * Qa.transpose();
  shape *= delta;
  log_det += dd * std::log(delta) + std::log1p(-sigma);
  return true;
}

void Ellipsoid::symmetrize() { shape = 0.5 * (shape + shape.transpose()).eval(); }

NodeResult ellipsoid_feasible(const ConstraintGeometry& g, const Facet& f, const EllipsoidConfig& config) {
  const int n = g.n;
  const int depth = f.depth();
  const int d = n - depth;
  if (f.n != n || depth > n) throw std::invalid_argument("ellipsoid_feasible: facet does not match geometry");
  for (int s : f.fixed)
    if (s != 1 && s != -1) throw std::invalid_argument("ellipsoid_feasible: fixed signs must be +-1");

  const double rho = config.weakening_radius(n);
  const double r = config.volume_radius(n);
  const ConstraintGeometry weak = g.weakened(rho);
  Facet thick = f;
  thick.thickness = std::max(f.thickness, config.facet_thickness);
  SeparationOracle oracle(weak, thick, 1e-12);

  NodeResult result;
  result.depth = depth;
  result.prefix = f.fixed;

  RealVector center = RealVector::Zero(d);
  RealVector x = assemble(f, center);
  if (oracle.contains(x)) {
    result.feasible = true;
    result.witness = x;
    return result;
  }
  if (d == 0) return result;

  // Alternating projections onto a half-weakened set and the thin facet; a
  // limit point lands strictly inside the weakened sets.
  if (config.fast_path_iters > 0) {
    ConstraintProjector<double> half(g.weakened(rho / 2));
    Facet thin = f;
    thin.thickness = 0;
    RealVector y = x, u;
    for (int i = 0; i < config.fast_path_iters; ++i) {
      half.project_relaxed(y, u);
      y = project_facet(u, thin);
      if (oracle.contains(y)) {
        result.feasible = true;
        result.fast_path = true;
        result.witness = y;
        return result;
      }
    }
  }

  const double radius =
      config.initial_radius > 0 ? config.initial_radius : std::sqrt(double(d)) * (1 + thick.thickness) + 2 * r;
  const std::uint64_t cap =
      config.max_iters > 0
          ? config.max_iters
          : static_cast<std::uint64_t>(2.0 * d * (d + 1) * std::log(radius / r)) + 100;

  if (d == 1) {
    double lo = -radius, hi = radius;
    for (std::uint64_t it = 0; it < cap; ++it) {
      result.ellipsoid_iters = it + 1;
      center[0] = 0.5 * (lo + hi);
      x = assemble(f, center);
      const OracleResult o = oracle.query(x);
      if (o.in_both) {
        result.feasible = true;
        result.witness = x;
        return result;
      }
      const double a = o.plane.normal[n - 1];
      const double b = o.plane.offset - o.plane.normal.head(depth).dot(x.head(depth));
      if (std::abs(a) < 1e-15) return result;
      if (a > 0) hi = std::min(hi, b / a);
      else lo = std::max(lo, b / a);
      if (hi - lo < 2 * r) return result;
    }
    return result;
  }

  Ellipsoid ell(d, radius);
  const double floor_log_det = 2.0 * d * std::log(r);
  for (std::uint64_t it = 0; it < cap; ++it) {
    result.ellipsoid_iters = it + 1;
    x = assemble(f, ell.center);
    const OracleResult o = oracle.query(x);
    if (o.in_both) {
      result.feasible = true;
      result.witness = x;
      return result;
    }
    const RealVector a = o.plane.normal.tail(d);
    const double b = o.plane.offset - o.plane.normal.head(depth).dot(x.head(depth));
    if (!ell.cut(a, b)) return result;
    if (ell.log_det < floor_log_det) return result;
    if (it % 100 == 99) ell.symmetrize();
  }
  return result;
}

NodeEvaluator::NodeEvaluator(const Instance& instance, const EllipsoidConfig& config)
    : base_(ConstraintGeometry::from_instance(instance, true)),
      weakened_(base_.weakened(config.weakening_radius(instance.n))),
      config_(config) {}

NodeResult NodeEvaluator::evaluate(const std::vector<int>& prefix) const {
  return ellipsoid_feasible(base_, Facet{base_.n, prefix, 0.0}, config_);
}

BnbResult branch_and_bound(const Instance& instance, const BnbConfig& config,
                           std::vector<SignSequence>* all_solutions) {
  instance.validate();
  const auto start = std::chrono::steady_clock::now();
  const int n = instance.n;
  const NodeEvaluator evaluator(instance, config.ellipsoid);
  BnbResult result;
  result.nodes_per_depth.assign(static_cast<std::size_t>(n + 1), 0);
  std::vector<int> prefix{1};
  Eigen::VectorXi leaf(n);

  std::function<bool()> descend = [&]() -> bool {
    const int depth = static_cast<int>(prefix.size());
    if (result.nodes >= config.max_nodes) return true;
    ++result.nodes;
    ++result.nodes_per_depth[depth];
    if (depth == n) {
      for (int k = 0; k < n; ++k) leaf[k] = prefix[k];
      SignSequence candidate(leaf);
      if (!verify(candidate, instance)) return false;
      if (all_solutions) all_solutions->push_back(candidate);
      if (!result.solved) {
        result.solved = true;
        result.solution = candidate;
      }
      return !config.enumerate_all;
    }
    const NodeResult node = evaluator.evaluate(prefix);
    result.ellipsoid_iters += node.ellipsoid_iters;
    if (!node.feasible) return false;
    for (int sign : {1, -1}) {
      prefix.push_back(sign);
      const bool stop = descend();
      prefix.pop_back();
      if (stop) return true;
    }
    return false;
  };
  descend();
  result.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

TreeWidthProfile tree_width_profile(const Instance& instance, const std::vector<int>& depths, int samples_per_depth,
                                    std::uint64_t seed, const EllipsoidConfig& config, int jobs) {
  if (samples_per_depth < 1) throw std::invalid_argument("tree_width_profile: need samples");
  const int n = instance.n;
  const NodeEvaluator evaluator(instance, config);
  TreeWidthProfile prof;
  prof.n = n;
  prof.depths = depths;
  prof.samples_per_depth = samples_per_depth;
  for (int depth : depths) {
    if (depth < 0 || depth > n) throw std::invalid_argument("tree_width_profile: depth out of range");
    std::vector<char> feasible(static_cast<std::size_t>(samples_per_depth), 0);
    parallel_for(samples_per_depth, jobs, [&](int i) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(depth) * 1'000'003ULL + static_cast<std::uint64_t>(i)));
      std::vector<int> prefix(static_cast<std::size_t>(depth));
      for (auto& s : prefix) s = rng.sign();
      feasible[i] = evaluator.evaluate(prefix).feasible;
    });
    const double p =
        static_cast<double>(std::count(feasible.begin(), feasible.end(), 1)) / static_cast<double>(samples_per_depth);
    prof.p_feasible.push_back(p);
    prof.w.push_back(p > 0 ? double(depth) / n + std::log2(p) / n : -std::numeric_limits<double>::infinity());
  }
  return prof;
}

}  // namespace bitret
