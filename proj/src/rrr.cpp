#include "bitret/rrr.hpp"

#include "bitret/parallel.hpp"
#include "bitret/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bitret {

namespace {

RealVector random_start(int n, Rng& rng) {
  RealVector x(n);
  for (int k = 0; k < n; ++k) x[k] = rng.uniform(-1.0, 1.0);
  return x;
}

SignSequence to_signs(const RealVector& pb) {
  Eigen::VectorXi v = pb.unaryExpr([](double t) { return t >= 0 ? 1 : -1; });
  return SignSequence(std::move(v));
}

}  // namespace

void RrrConfig::validate() const {
  if (!(beta > 0 && beta < 2)) throw std::invalid_argument("rrr: beta must lie in (0, 2)");
  if (max_iters == 0) throw std::invalid_argument("rrr: max_iters must be positive");
}

RealVector rrr_step(const RealVector& x, const ConstraintGeometry& g, double beta) {
  return rrr_map(
      x, [&](const RealVector& y) { return project_A(y, g); }, [](const RealVector& y) { return project_B_real(y); },
      beta);
}

RealVector rrr_step_reflections(const RealVector& x, const ConstraintGeometry& g, double beta) {
  const double gamma = beta / 2;
  const RealVector rb = 2.0 * project_B_real(x) - x;
  const RealVector rarb = 2.0 * project_A(rb, g) - rb;
  return (1 - gamma) * x + gamma * rarb;
}

RunResult run_rrr(const Instance& instance, const RrrConfig& config) {
  config.validate();
  const auto start_time = std::chrono::steady_clock::now();
  const int n = instance.n;
  ConstraintProjector<double> projector(ConstraintGeometry::from_instance(instance));
  Rng rng(config.seed);
  const double tol = config.tol > 0 ? config.tol : 1e-8 * std::sqrt(double(n));

  RunResult result;
  RealVector x = random_start(n, rng);
  RealVector pb(n), y(n), pa(n), dx(n);
  if (config.record_trajectory) result.trajectory.push_back(x);

  for (std::uint64_t it = 1; it <= config.max_iters; ++it) {
    pb = x.unaryExpr([](double t) { return t >= 0 ? 1.0 : -1.0; });
    y = 2.0 * pb - x;
    projector.project(y, pa);
    dx = config.beta * (pa - pb);
    x += dx;
    const double step = dx.norm();
    bool check = step < tol || (config.verify_every && it % config.verify_every == 0);
    if (step < result.min_step_norm) {
      result.min_step_norm = step;
      check = check || config.verify_every_improvement;
    }
    if (config.record_trajectory) result.trajectory.push_back(x);
    if (check) {
      SignSequence candidate = to_signs(pb);
      if (verify(candidate, instance)) {
        result.solved = true;
        result.solution = std::move(candidate);
        result.iterations = it;
        break;
      }
    }
    if (config.restart_every && it % config.restart_every == 0) x = random_start(n, rng);
    result.iterations = it;
  }
  result.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_time).count();
  return result;
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  double hi = values[mid];
  if (values.size() % 2) return hi;
  double lo = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

EnsembleResult run_ensemble(const Instance& instance, const RrrConfig& config, int trials, int jobs) {
  if (trials < 1) throw std::invalid_argument("run_ensemble: need at least one trial");
  EnsembleResult r;
  r.iterations.assign(static_cast<std::size_t>(trials), 0);
  std::vector<char> solved(static_cast<std::size_t>(trials), 0);
  parallel_for(trials, jobs, [&](int t) {
    RrrConfig c = config;
    c.seed = derive_seed(config.seed, static_cast<std::uint64_t>(t));
    c.record_trajectory = false;
    const RunResult run = run_rrr(instance, c);
    r.iterations[t] = run.solved ? run.iterations : config.max_iters;
    solved[t] = run.solved;
  });
  r.solved.assign(solved.begin(), solved.end());
  std::vector<double> v(r.iterations.begin(), r.iterations.end());
  r.median = median_of(v);
  double log_sum = 0;
  for (double c : v) log_sum += std::log(std::max(c, 1.0));
  r.geometric_mean = std::exp(log_sum / trials);
  r.mean = std::accumulate(v.begin(), v.end(), 0.0) / trials;
  r.censored = static_cast<int>(std::count(solved.begin(), solved.end(), 0));
  return r;
}

MagnitudeHistogram magnitude_histogram(const Instance& instance, const HistogramConfig& config) {
  if (!(config.beta > 0 && config.beta < 2)) throw std::invalid_argument("magnitude_histogram: beta in (0,2)");
  if (config.bins < 1 || !(config.max_value > 0)) throw std::invalid_argument("magnitude_histogram: bad binning");
  const int n = instance.n;
  ConstraintProjector<double> projector(ConstraintGeometry::from_instance(instance));
  Rng rng(config.seed);
  RealVector x = config.start ? *config.start : random_start(n, rng);
  if (x.size() != n) throw std::invalid_argument("magnitude_histogram: start length mismatch");
  RealVector pb(n), y(n), pa(n);

  MagnitudeHistogram h;
  h.counts.assign(static_cast<std::size_t>(config.bins), 0);
  h.bin_edges.resize(static_cast<std::size_t>(config.bins + 1));
  for (int b = 0; b <= config.bins; ++b) h.bin_edges[b] = config.max_value * b / config.bins;
  h.anomaly_cutoff = config.cutoff_factor * config.beta;
  std::uint64_t anomaly = 0;
  std::uint64_t shoulder = 0;
  constexpr int kFineBins = 200;
  std::vector<std::uint64_t> fine(kFineBins, 0);

  for (std::uint64_t it = 0; it < config.burn_in + config.iterations; ++it) {
    pb = x.unaryExpr([](double t) { return t >= 0 ? 1.0 : -1.0; });
    y = 2.0 * pb - x;
    projector.project(y, pa);
    x += config.beta * (pa - pb);
    if (it < config.burn_in) continue;
    for (int k = 0; k < n; ++k) {
      const double m = std::abs(x[k]);
      if (m < h.anomaly_cutoff) {
        ++anomaly;
        ++fine[std::min(kFineBins - 1, static_cast<int>(m / h.anomaly_cutoff * kFineBins))];
      } else if (m < 2 * h.anomaly_cutoff) ++shoulder;
      const int b = static_cast<int>(m / config.max_value * config.bins);
      ++h.counts[std::min(b, config.bins - 1)];
    }
  }
  h.samples = config.iterations * static_cast<std::uint64_t>(n);
  if (h.samples) {
    h.below_cutoff_fraction = static_cast<double>(anomaly) / static_cast<double>(h.samples);
    h.background_fraction = static_cast<double>(shoulder) / static_cast<double>(h.samples);
  }
  h.anomaly_fraction = std::max(0.0, h.below_cutoff_fraction - h.background_fraction);
  h.codimension = h.anomaly_fraction * n;
  // Half-weight radius of the spike: cumulative counts minus a flat
  // background at the shoulder density.
  const double excess = static_cast<double>(anomaly) - static_cast<double>(shoulder);
  if (excess > 0) {
    double cum = 0;
    for (int b = 0; b < kFineBins; ++b) {
      cum += static_cast<double>(fine[b]);
      const double right = h.anomaly_cutoff * (b + 1) / kFineBins;
      if (cum - static_cast<double>(shoulder) * (b + 1) / kFineBins >= 0.5 * excess) {
        h.anomaly_width = right;
        break;
      }
    }
  }
  return h;
}

ClusterStats cluster_experiment(const ConstraintGeometry& g, const SignSequence& p_B, const std::vector<int>& J) {
  if (J.size() > 20) throw std::invalid_argument("cluster_experiment: |J| must be at most 20");
  const int n = g.n;
  if (p_B.size() != n) throw std::invalid_argument("cluster_experiment: length mismatch");
  for (int j : J)
    if (j < 0 || j >= n) throw std::out_of_range("cluster_experiment: index out of range");
  ClusterStats st;
  st.facet_indices = J;
  const std::uint64_t count = std::uint64_t{1} << J.size();
  st.sample_count = count;
  ConstraintGeometry exact = g;
  exact.relaxed = false;
  ConstraintProjector<double> projector(exact);
  RealVector base = p_B.as_real();
  RealVector x(n), pa(n);
  RealVector sum = RealVector::Zero(n);
  double sum_sq = 0;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    x = base;
    for (std::size_t i = 0; i < J.size(); ++i) x[J[i]] = (mask >> i & 1) ? -2.0 : 2.0;
    projector.project(x, pa);
    sum += pa;
    sum_sq += pa.squaredNorm();
  }
  const double c = static_cast<double>(count);
  st.sigma_A = std::sqrt(std::max(0.0, sum_sq / c - (sum / c).squaredNorm()));
  return st;
}

ClusterStats cluster_experiment(const Instance& instance, const SignSequence& p_B, const std::vector<int>& J) {
  return cluster_experiment(ConstraintGeometry::from_instance(instance), p_B, J);
}

std::vector<RrrSample> sample_rrr_points(const Instance& instance, double beta, std::uint64_t burn_in,
                                         std::uint64_t stride, int count, int facet_size, std::uint64_t seed) {
  const int n = instance.n;
  if (facet_size < 0 || facet_size > n) throw std::invalid_argument("sample_rrr_points: bad facet size");
  ConstraintProjector<double> projector(ConstraintGeometry::from_instance(instance));
  Rng rng(seed);
  RealVector x = random_start(n, rng);
  RealVector pb(n), y(n), pa(n);
  std::vector<RrrSample> out;
  std::vector<int> order(static_cast<std::size_t>(n));
  for (std::uint64_t it = 1; static_cast<int>(out.size()) < count; ++it) {
    pb = x.unaryExpr([](double t) { return t >= 0 ? 1.0 : -1.0; });
    y = 2.0 * pb - x;
    projector.project(y, pa);
    x += beta * (pa - pb);
    if (it <= burn_in || (it - burn_in) % stride != 0) continue;
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + facet_size, order.end(),
                      [&](int a, int b) { return std::abs(x[a]) < std::abs(x[b]); });
    std::vector<int> smallest(order.begin(), order.begin() + facet_size);
    std::sort(smallest.begin(), smallest.end());
    out.push_back({to_signs(x), std::move(smallest)});
  }
  return out;
}

double ks_exponential_statistic(const std::vector<double>& sample) {
  if (sample.empty()) throw std::invalid_argument("ks_exponential_statistic: empty sample");
  std::vector<double> s = sample;
  std::sort(s.begin(), s.end());
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
  const double m = static_cast<double>(s.size());
  double d = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = 1.0 - std::exp(-s[i] / mean);
    d = std::max({d, (i + 1) / m - f, f - i / m});
  }
  return d;
}

}  // namespace bitret
