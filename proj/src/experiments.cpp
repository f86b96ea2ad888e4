#include "bitret/experiments.hpp"

#include "bitret/parallel.hpp"
#include "bitret/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bitret {

namespace {

std::vector<int> uniform_facet(int n, int size, Rng& rng) {
  std::vector<int> j = rng.sample(n, size);
  std::sort(j.begin(), j.end());
  return j;
}

SignSequence random_orbit_image(const SignSequence& s, Rng& rng) {
  SignSequence t = s.shifted(static_cast<int>(rng.below(static_cast<std::uint64_t>(s.size()))));
  if (rng.bernoulli(0.5)) t = t.reflected();
  if (rng.bernoulli(0.5)) t = t.negated();
  return t;
}

}  // namespace

ClusterPopulations cluster_populations(const Instance& instance, const SignSequence& solution,
                                       const Instance& sample_instance, const ClusterExperimentConfig& config) {
  if (config.draws < 1) throw std::invalid_argument("cluster_populations: draws must be positive");
  if (!verify(solution, instance)) throw std::invalid_argument("cluster_populations: solution does not verify");
  if (sample_instance.n != instance.n) throw std::invalid_argument("cluster_populations: length mismatch");
  const int n = instance.n;
  const auto geometry = ConstraintGeometry::from_instance(instance);
  const auto sample_geometry = ConstraintGeometry::from_instance(sample_instance);
  const auto draws = static_cast<std::size_t>(config.draws);
  ClusterPopulations out;
  out.solutions.resize(draws);
  out.random.resize(draws);
  out.rrr.resize(draws);

  const auto rrr_points = sample_rrr_points(sample_instance, config.beta, config.burn_in, config.stride,
                                            config.draws, config.facet_size, derive_seed(config.seed, 2));
  parallel_for(draws, config.jobs, [&](std::size_t i) {
    Rng sol_rng(derive_seed(derive_seed(config.seed, 0), i));
    const SignSequence p_sol = random_orbit_image(solution, sol_rng);
    out.solutions[i] = cluster_experiment(geometry, p_sol, uniform_facet(n, config.facet_size, sol_rng)).sigma_A;

    Rng rnd_rng(derive_seed(derive_seed(config.seed, 1), i));
    Eigen::VectorXi v(n);
    for (int k = 0; k < n; ++k) v[k] = rnd_rng.sign();
    out.random[i] = cluster_experiment(sample_geometry, SignSequence(std::move(v)),
                                       uniform_facet(n, config.facet_size, rnd_rng))
                        .sigma_A;

    Rng rrr_rng(derive_seed(derive_seed(config.seed, 3), i));
    const std::vector<int> j =
        config.rrr_smallest_facet ? rrr_points[i].smallest : uniform_facet(n, config.facet_size, rrr_rng);
    out.rrr[i] = cluster_experiment(sample_geometry, rrr_points[i].p_B, j).sigma_A;
  });
  return out;
}

ClusterPopulations cluster_populations(const Instance& instance, const SignSequence& solution,
                                       const ClusterExperimentConfig& config) {
  return cluster_populations(instance, solution, instance, config);
}

SampleSummary summarize(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("summarize: empty sample");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = values.size() > 1 ? ss / (n - 1) : 0.0;
  return {mean, std::sqrt(var / n)};
}

std::vector<BetaSweepRow> beta_sweep(const Instance& instance, const std::vector<double>& betas, int trials,
                                     std::uint64_t max_iters, std::uint64_t seed, int jobs) {
  std::vector<BetaSweepRow> rows;
  for (double beta : betas) {
    RrrConfig config;
    config.beta = beta;
    config.max_iters = max_iters;
    config.seed = seed;
    const auto ens = run_ensemble(instance, config, trials, jobs);
    rows.push_back({beta, ens.median, ens.median * beta, ens.censored, trials});
  }
  return rows;
}

double geometric_mean_of_medians(const std::vector<Instance>& instances, const RrrConfig& config, int trials,
                                 int jobs) {
  if (instances.empty()) throw std::invalid_argument("geometric_mean_of_medians: no instances");
  double log_sum = 0;
  for (const auto& inst : instances) log_sum += std::log(run_ensemble(inst, config, trials, jobs).median);
  return std::exp(log_sum / static_cast<double>(instances.size()));
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need two or more points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0) throw std::invalid_argument("fit_line: x values are constant");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace bitret
