#pragma once

#include "bitret/core.hpp"
#include "bitret/rrr.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bitret {

// Cluster sizes sigma_A for perturbations around three kinds of points in B:
// random orbit images of a known solution, RRR iterates and uniform random
// sign sequences. Facet index sets are drawn uniformly for all three unless
// rrr_smallest_facet selects the facet_size smallest |x_k| for RRR points.
struct ClusterPopulations {
  std::vector<double> solutions;
  std::vector<double> rrr;
  std::vector<double> random;
};

struct ClusterExperimentConfig {
  int facet_size = 6;
  bool rrr_smallest_facet = false;
  int draws = 50;
  double beta = 0.3;
  std::uint64_t burn_in = 10'000;
  std::uint64_t stride = 1'000;
  std::uint64_t seed = 0;
  int jobs = 1;
};

// Solutions are scored against `instance`; RRR and random points are drawn
// and scored against `sample_instance`, which may be insoluble.
ClusterPopulations cluster_populations(const Instance& instance, const SignSequence& solution,
                                       const Instance& sample_instance, const ClusterExperimentConfig& config);
ClusterPopulations cluster_populations(const Instance& instance, const SignSequence& solution,
                                       const ClusterExperimentConfig& config);

struct SampleSummary {
  double mean = 0;
  double standard_error = 0;
};
SampleSummary summarize(const std::vector<double>& values);

struct BetaSweepRow {
  double beta = 0;
  double median = 0;
  double median_times_beta = 0;
  int censored = 0;
  int trials = 0;
};

// One RRR ensemble per beta; trial seeds come from derive_seed(seed, trial)
// and are shared across beta values.
std::vector<BetaSweepRow> beta_sweep(const Instance& instance, const std::vector<double>& betas, int trials,
                                     std::uint64_t max_iters, std::uint64_t seed, int jobs);

// Geometric mean of the per-instance median iteration counts.
double geometric_mean_of_medians(const std::vector<Instance>& instances, const RrrConfig& config, int trials,
                                 int jobs);

// Least-squares slope and intercept of y against x.
struct LineFit {
  double slope = 0;
  double intercept = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace bitret
