#include "bitret/bnb.hpp"
#include "bitret/instances.hpp"
#include "bitret/random.hpp"
#include "unit/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace bitret;

namespace {

std::vector<double> to_std(const RealVector& x) { return std::vector<double>(x.data(), x.data() + x.size()); }

// Smallest distance between the relaxed magnitude set and the facet found by
// alternating projections from several random starts, each run until the
// iterate stops moving. Uses the direct transform throughout.
double alternating_gap(const std::vector<double>& bounds, const std::vector<int>& prefix, int n, std::uint64_t seed,
                       int starts = 5, int max_iters = 3000) {
  Rng rng(seed);
  double best = std::numeric_limits<double>::infinity();
  auto clamp_facet = [&](std::vector<double> y) {
    for (int k = 0; k < n; ++k) y[k] = k < static_cast<int>(prefix.size()) ? prefix[k] : std::clamp(y[k], -1.0, 1.0);
    return y;
  };
  for (int s = 0; s < starts; ++s) {
    std::vector<double> y(static_cast<std::size_t>(n));
    for (double& v : y) v = rng.uniform(-1, 1);
    y = clamp_facet(y);
    double gap = 0;
    for (int it = 0; it < max_iters; ++it) {
      const auto a = oracle::relaxed_projection(y, bounds);
      const auto next = clamp_facet(a);
      gap = 0;
      double move = 0;
      for (int k = 0; k < n; ++k) {
        gap += (a[k] - y[k]) * (a[k] - y[k]);
        move += (next[k] - y[k]) * (next[k] - y[k]);
      }
      gap = std::sqrt(gap);
      y = next;
      if (gap < 1e-9 || std::sqrt(move) < 1e-13) break;
    }
    best = std::min(best, gap);
  }
  return best;
}

std::set<oracle::Signs> exhaustive_orbits(const Instance& inst) {
  std::set<oracle::Signs> reps;
  for (std::uint64_t mask = 0; mask < (1ULL << inst.n); ++mask) {
    const auto s = oracle::from_mask(mask, inst.n);
    if (verify(oracle::to_sequence(s), inst)) reps.insert(oracle::orbit_min(s));
  }
  return reps;
}

}  // namespace

TEST(EllipsoidFeasible, EmptyFacetOnSolubleInstance) {
  const SignSequence s = gen_random(12, 0.5, 3);
  const ConstraintGeometry g = ConstraintGeometry::from_instance(make_instance(s, InstanceKind::Exact), true);
  const NodeResult r = ellipsoid_feasible(g, Facet{12, {}, 0});
  EXPECT_TRUE(r.feasible);
  ASSERT_TRUE(r.witness.has_value());
}

TEST(EllipsoidFeasible, FullPlantedFacet) {
  const SignSequence s = gen_random(12, 0.5, 4);
  const ConstraintGeometry g = ConstraintGeometry::from_instance(make_instance(s, InstanceKind::Exact), true);
  std::vector<int> prefix(s.values().data(), s.values().data() + 12);
  const NodeResult r = ellipsoid_feasible(g, Facet{12, prefix, 0});
  ASSERT_TRUE(r.feasible);
  EXPECT_LT((*r.witness - s.as_real()).norm(), 1e-9);
}

TEST(EllipsoidFeasible, AgreesWithAlternatingProjectionOracle) {
  const int n = 12;
  const SignSequence s = gen_random(n, 0.5, 17);
  const Instance inst = make_instance(s, InstanceKind::Exact);
  const ConstraintGeometry g = ConstraintGeometry::from_instance(inst, true);
  const NodeEvaluator evaluator(inst);
  const auto bounds = to_std(g.targets);
  int infeasible = 0, feasible = 0;
  for (int mask = 0; mask < 32; ++mask) {
    std::vector<int> prefix{1};
    for (int k = 0; k < 5; ++k) prefix.push_back((mask >> k) & 1 ? -1 : 1);
    const double gap = alternating_gap(bounds, prefix, n, 100 + mask);
    const NodeResult r = evaluator.evaluate(prefix);
    if (gap > 1e-2) {
      ++infeasible;
      EXPECT_FALSE(r.feasible) << "mask=" << mask << " gap=" << gap;
      // No sign completion fits under the magnitude budget either.
      for (int c = 0; c < 64; ++c) {
        std::vector<double> x(prefix.begin(), prefix.end());
        for (int k = 0; k < 6; ++k) x.push_back((c >> k) & 1 ? -1.0 : 1.0);
        const auto m = oracle::sq_magnitudes(x);
        bool inside = true;
        for (int q = 0; q <= n / 2; ++q) inside = inside && m[q] <= bounds[q] + 1e-9;
        EXPECT_FALSE(inside);
      }
    } else if (gap < 1e-6) {
      ++feasible;
      EXPECT_TRUE(r.feasible) << "mask=" << mask;
    }
  }
  EXPECT_GT(infeasible, 0);
  EXPECT_GT(feasible, 0);
}

TEST(EllipsoidFeasible, WitnessesSatisfyWeakenedInequalities) {
  Rng rng(5);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 10 + static_cast<int>(rng.below(20));
    const Instance inst = make_instance(gen_random(n, 0.5, 200 + trial), trial % 2 ? InstanceKind::Noisy
                                                                                   : InstanceKind::Exact,
                                        std::nullopt, trial);
    const NodeEvaluator evaluator(inst);
    const EllipsoidConfig cfg;
    const auto bounds = evaluator.geometry();
    std::vector<int> prefix;
    const int depth = static_cast<int>(rng.below(static_cast<std::uint64_t>(n / 2)));
    for (int k = 0; k < depth; ++k) prefix.push_back(rng.sign());
    const NodeResult r = evaluator.evaluate(prefix);
    if (!r.feasible) continue;
    ++checked;
    const auto m = oracle::sq_magnitudes(to_std(*r.witness));
    for (int q = 0; q <= n / 2; ++q) EXPECT_LE(m[q], bounds.bound(q) + 1e-9);
    for (int k = 0; k < n; ++k) {
      if (k < depth) EXPECT_LE(std::abs((*r.witness)[k] - prefix[k]), cfg.facet_thickness + 1e-9);
      else EXPECT_LE(std::abs((*r.witness)[k]), 1 + cfg.facet_thickness + 1e-9);
    }
  }
  EXPECT_GT(checked, 10);
}

TEST(Ellipsoid, CutsShrinkVolumeByStandardFactor) {
  Rng rng(6);
  for (int d : {2, 3, 7, 20}) {
    Ellipsoid e(d, 3.0);
    for (int step = 0; step < 200; ++step) {
      RealVector a(d);
      for (int k = 0; k < d; ++k) a[k] = rng.normal();
      const double s = std::sqrt(a.dot(e.shape * a));
      const double depth = step % 2 ? 0.0 : rng.uniform(0, 0.9);
      const double b = a.dot(e.center) - depth * s;
      const RealVector old_center = e.center;
      const Eigen::MatrixXd old_shape = e.shape;
      const double before = e.log_det;
      ASSERT_TRUE(e.cut(a, b));
      EXPECT_LE(e.log_det - before, -1.0 / (d + 1) + 1e-9) << "d=" << d;
      const double direct = std::log(e.shape.determinant());
      EXPECT_NEAR(e.log_det, direct, 1e-6 * std::max(1.0, std::abs(direct)));
      // Kept half of the old ellipsoid lies in the new one.
      const Eigen::LLT<Eigen::MatrixXd> old_factor(old_shape);
      const Eigen::LLT<Eigen::MatrixXd> new_factor(e.shape);
      for (int t = 0; t < 20; ++t) {
        RealVector u(d);
        for (int k = 0; k < d; ++k) u[k] = rng.normal();
        u *= std::pow(rng.uniform(), 1.0 / d) / u.norm();
        const RealVector p = old_center + old_factor.matrixL() * u;
        if (a.dot(p) > b) continue;
        const RealVector rel = p - e.center;
        EXPECT_LE(rel.dot(new_factor.solve(rel)), 1 + 1e-7);
      }
      if (e.log_det < -40) break;
    }
  }
}

TEST(Ellipsoid, CutMissingEllipsoidReportsEmpty) {
  Ellipsoid e(3, 1.0);
  RealVector a = RealVector::Unit(3, 0);
  EXPECT_FALSE(e.cut(a, -1.5));
  EXPECT_THROW(Ellipsoid(1, 1.0), std::invalid_argument);
}

TEST(BranchAndBound, LegendreSevenOrbit) {
  const SignSequence s = gen_legendre(7);
  const Instance inst = make_instance(s, InstanceKind::Exact);
  const BnbResult r = branch_and_bound(inst);
  ASSERT_TRUE(r.solved);
  const auto all = oracle::all_with_autocorrelation(oracle::autocorrelation(oracle::signs_of(s)));
  const std::set<oracle::Signs> members(all.begin(), all.end());
  EXPECT_TRUE(members.count(oracle::signs_of(*r.solution)));
  EXPECT_EQ(oracle::orbit_min(oracle::signs_of(*r.solution)), oracle::orbit_min(oracle::signs_of(s)));
}

TEST(BranchAndBound, NodeEnvelopeAndRootSymmetry) {
  const int n = 12;
  const Instance inst = make_instance(gen_random(n, 0.5, 21), InstanceKind::Exact);
  const BnbResult r = branch_and_bound(inst);
  ASSERT_TRUE(r.solved);
  EXPECT_TRUE(verify(*r.solution, inst));
  EXPECT_GE(r.nodes, static_cast<std::uint64_t>(n));
  EXPECT_LE(r.nodes, 1u << n);
  EXPECT_EQ(r.nodes_per_depth[1], 1u);
  EXPECT_EQ((*r.solution)[0], 1);
  for (int k = 1; k < n; ++k) EXPECT_LE(r.nodes_per_depth[k + 1], 2 * r.nodes_per_depth[k]);
}

TEST(BranchAndBound, EnumerationMatchesExhaustiveOrbits) {
  Rng rng(8);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 6 + static_cast<int>(rng.below(6));
    const InstanceKind kind = trial % 2 ? InstanceKind::Noisy : InstanceKind::Exact;
    const Instance inst = make_instance(gen_random(n, 0.5, 300 + trial), kind, std::nullopt, trial);
    BnbConfig cfg;
    cfg.enumerate_all = true;
    std::vector<SignSequence> found;
    branch_and_bound(inst, cfg, &found);
    std::set<oracle::Signs> reps;
    for (const auto& s : found) {
      EXPECT_EQ(s[0], 1);
      EXPECT_TRUE(verify(s, inst));
      reps.insert(oracle::orbit_min(oracle::signs_of(s)));
    }
    EXPECT_EQ(reps, exhaustive_orbits(inst)) << "n=" << n;
  }
}

TEST(BranchAndBound, NodeBudgetStopsSearch) {
  BnbConfig cfg;
  cfg.max_nodes = 5;
  const BnbResult r = branch_and_bound(make_instance(gen_random(14, 0.5, 2), InstanceKind::Exact), cfg);
  EXPECT_LE(r.nodes, 5u);
}

TEST(TreeWidth, ShallowDepthsAreFullyFeasible) {
  const Instance inst = make_instance(gen_average_case(24, 100, 1).sequence, InstanceKind::Exact);
  const TreeWidthProfile p = tree_width_profile(inst, {1, 2, 3}, 100, 4);
  for (std::size_t i = 0; i < p.depths.size(); ++i) {
    EXPECT_EQ(p.p_feasible[i], 1.0);
    EXPECT_NEAR(p.w[i], p.depths[i] / 24.0, 1e-15);
  }
}

TEST(TreeWidth, WidthFormulaAndMonotoneEnvelope) {
  const int n = 16, samples = 200;
  const Instance inst = make_instance(gen_average_case(n, 100, 2).sequence, InstanceKind::Exact);
  std::vector<int> depths;
  for (int k = 1; k <= n; ++k) depths.push_back(k);
  const TreeWidthProfile p = tree_width_profile(inst, depths, samples, 9, {}, 2);
  auto sigma = [&](double q) { return std::sqrt(q * (1 - q) / samples) + 1.0 / samples; };
  for (std::size_t i = 0; i < depths.size(); ++i) {
    const double q = p.p_feasible[i];
    EXPECT_GE(q, 0.0);
    EXPECT_LE(q, 1.0);
    if (q > 0) EXPECT_NEAR(p.w[i], depths[i] / double(n) + std::log2(q) / n, 1e-12);
    else EXPECT_TRUE(std::isinf(p.w[i]));
    if (i > 0) {
      // n(K) = 2^K p_K against 2 n(K - 1), in units of 2^K.
      EXPECT_LE(q, p.p_feasible[i - 1] + 3 * (sigma(q) + sigma(p.p_feasible[i - 1])));
    }
  }
}
