#pragma once

#include "bitret/core.hpp"
#include "bitret/projections.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace bitret {

struct RrrConfig {
  double beta = 0.3;
  std::uint64_t max_iters = 10'000'000;
  // Step norm that triggers a verification; <= 0 selects 1e-8 sqrt(n).
  double tol = 0;
  std::uint64_t seed = 0;
  bool record_trajectory = false;
  bool verify_every_improvement = true;
  std::uint64_t verify_every = 10'000;
  // Fresh random start every this many iterations; 0 disables.
  std::uint64_t restart_every = 0;

  void validate() const;
};

struct IterateState {
  RealVector x;
  SignSequence p_B;
  RealVector p_A;
  double step_norm = 0;
  std::uint64_t iter = 0;
};

struct RunResult {
  bool solved = false;
  std::optional<SignSequence> solution;
  std::uint64_t iterations = 0;
  double wall_ms = 0;
  double min_step_norm = std::numeric_limits<double>::infinity();
  std::vector<RealVector> trajectory;
};

// x + beta (P_A(2 P_B(x) - x) - P_B(x)) for arbitrary projection callables.
template <typename ProjA, typename ProjB>
RealVector rrr_map(const RealVector& x, ProjA&& project_a, ProjB&& project_b, double beta) {
  const RealVector pb = project_b(x);
  const RealVector pa = project_a((2.0 * pb - x).eval());
  return x + beta * (pa - pb);
}

RealVector rrr_step(const RealVector& x, const ConstraintGeometry& g, double beta);
// The same map as (1 - beta/2) x + (beta/2) R_A(R_B(x)), R = 2P - I.
RealVector rrr_step_reflections(const RealVector& x, const ConstraintGeometry& g, double beta);

// Iterates from a uniform [-1,1]^n start until P_B(x) verifies or the budget
// runs out. Verification happens on every new minimum of the step norm, at
// the step-norm tolerance, and every verify_every iterations.
RunResult run_rrr(const Instance& instance, const RrrConfig& config);

struct EnsembleResult {
  std::vector<std::uint64_t> iterations;  // censored trials hold max_iters
  std::vector<bool> solved;
  double median = 0;
  double geometric_mean = 0;
  double mean = 0;
  int censored = 0;
};

// Trial t runs with seed derive_seed(config.seed, t).
EnsembleResult run_ensemble(const Instance& instance, const RrrConfig& config, int trials, int jobs = 1);

double median_of(std::vector<double> values);

struct MagnitudeHistogram {
  std::vector<double> bin_edges;        // bins + 1 edges on [0, max_value]
  std::vector<std::uint64_t> counts;
  std::uint64_t samples = 0;            // iterations * n component values
  double anomaly_cutoff = 0;            // c * beta
  double below_cutoff_fraction = 0;     // share with |x_k| < cutoff
  // Share in [cutoff, 2 cutoff): the broad distribution's mass per cutoff
  // width next to the spike.
  double background_fraction = 0;
  // Spike weight above the broad distribution: below_cutoff - background.
  double anomaly_fraction = 0;
  double codimension = 0;               // anomaly_fraction * n
  // |x| below which half of the spike weight lies (resolution cutoff/200).
  double anomaly_width = 0;
};

struct HistogramConfig {
  double beta = 0.01;
  std::uint64_t burn_in = 100'000;
  std::uint64_t iterations = 1'000'000;
  std::uint64_t seed = 0;
  int bins = 200;
  double max_value = 2.0;
  double cutoff_factor = 5.0;
  // Optional start point; uniform random when empty.
  std::optional<RealVector> start;
};

MagnitudeHistogram magnitude_histogram(const Instance& instance, const HistogramConfig& config);

struct ClusterStats {
  std::vector<int> facet_indices;
  double sigma_A = 0;
  std::uint64_t sample_count = 0;
};

// Projects the 2^|J| points that match p_B off J and take values +-2 on J,
// and returns the RMS spread of the projections.
ClusterStats cluster_experiment(const ConstraintGeometry& g, const SignSequence& p_B, const std::vector<int>& J);
ClusterStats cluster_experiment(const Instance& instance, const SignSequence& p_B, const std::vector<int>& J);

// Samples P_B(x) from a long RRR run (one sample every `stride` iterations
// after burn-in) together with the indices of the `facet_size` smallest |x_k|.
struct RrrSample {
  SignSequence p_B;
  std::vector<int> smallest;
};
std::vector<RrrSample> sample_rrr_points(const Instance& instance, double beta, std::uint64_t burn_in,
                                         std::uint64_t stride, int count, int facet_size, std::uint64_t seed);

// One-sample Kolmogorov-Smirnov statistic against an exponential with the
// sample mean.
double ks_exponential_statistic(const std::vector<double>& sample);

}  // namespace bitret
