#include "bitret/spectral.hpp"

#include "bitret/random.hpp"

#include <limits>
#include <stdexcept>

namespace bitret {

template class FourierPlan<double>;
template class FourierPlan<float>;

ComplexVector dft(const ComplexVector& x, Direction dir) {
  if (x.size() < 1) throw std::invalid_argument("dft: empty input");
  return FourierPlan<double>(static_cast<int>(x.size())).transform(x, dir);
}

ComplexVector dft(const RealVector& x, Direction dir) { return dft(ComplexVector(x.cast<std::complex<double>>()), dir); }

namespace {

MagnitudeData half_spectrum(const ComplexVector& spec, double scale) {
  const int n = static_cast<int>(spec.size());
  MagnitudeData m;
  m.n = n;
  m.sq.resize(n / 2 + 1);
  for (int q = 0; q <= n / 2; ++q) m.sq[q] = spec[q].real() * scale;
  return m;
}

}  // namespace

MagnitudeData magnitudes_from_autocorrelation(const IntVector& a, bool allow_negative) {
  const int n = static_cast<int>(a.size());
  if (n < 2) throw std::invalid_argument("magnitudes_from_autocorrelation: length must be at least 2");
  for (int k = 1; k < n; ++k)
    if (a[k] != a[n - k]) throw std::invalid_argument("magnitudes_from_autocorrelation: input not symmetric");
  const ComplexVector spec = dft(RealVector(a.cast<double>()));
  const double tol = 1e-9 * std::max(1.0, a.cast<double>().cwiseAbs().maxCoeff());
  for (int q = 0; q < n; ++q)
    if (std::abs(spec[q].imag()) > tol)
      throw std::domain_error("magnitudes_from_autocorrelation: spectrum not real");
  MagnitudeData m = half_spectrum(spec, 1.0 / std::sqrt(double(n)));
  if (!allow_negative)
    for (int q = 0; q <= n / 2; ++q)
      if (m.sq[q] < -1e-9 * n)
        throw std::domain_error("magnitudes_from_autocorrelation: negative magnitude at q=" + std::to_string(q) +
                                " (not an autocorrelation)");
  return m;
}

MagnitudeData magnitudes_of(const RealVector& x) {
  const ComplexVector spec = dft(x);
  MagnitudeData m;
  m.n = static_cast<int>(x.size());
  m.sq.resize(m.n / 2 + 1);
  for (int q = 0; q <= m.n / 2; ++q) m.sq[q] = std::norm(spec[q]);
  return m;
}

MagnitudeData magnitudes_of(const SignSequence& s) { return magnitudes_of(s.as_real()); }

double noisy_zero_threshold(int n, double slack) {
  return 2.0 * (n - 1) / std::pow(double(n), 1.5) * slack;
}

HardnessReport hardness_index(const MagnitudeData& data, double zero_threshold) {
  HardnessReport rep;
  rep.magnitudes = data;
  const int n = data.n;
  rep.excluded_q.push_back(0);
  if (n % 2 == 0) rep.excluded_q.push_back(n / 2);
  const int last = (n % 2 == 0) ? n / 2 - 1 : n / 2;
  if (last < 1) {
    rep.h = 0;
    return rep;
  }
  // Each included q in 1..last stands for the pair q, n-q; the mean over the
  // pair set equals the mean over the half.
  double sum_log = 0;
  for (int q = 1; q <= last; ++q) {
    const double v = data.sq[q];
    if (v <= zero_threshold || v <= 0) {
      rep.h = 0;
      return rep;
    }
    sum_log += std::log(v);
  }
  rep.h = std::exp(sum_log / last);
  return rep;
}

HardnessReport hardness_index(const SignSequence& s) { return hardness_index(magnitudes_of(s)); }

HardnessReport hardness_index(const Instance& instance, double slack) {
  switch (instance.kind) {
    case InstanceKind::Exact:
      return hardness_index(magnitudes_from_autocorrelation(instance.autocorrelation, instance.meta.raw));
    case InstanceKind::Noisy:
      return hardness_index(magnitudes_from_autocorrelation(instance.autocorrelation, true),
                            noisy_zero_threshold(instance.n, slack));
    case InstanceKind::FixedPrecision:
      return hardness_index(MagnitudeData{instance.n, instance.sq_magnitudes}, instance.eta);
  }
  return {};
}

HardnessStatistics hardness_statistics(int n, double delta, int samples, std::uint64_t seed) {
  if (!(delta > 0 && delta < 1)) throw std::invalid_argument("hardness_statistics: delta must be in (0,1)");
  if (n < 2 || samples < 1) throw std::invalid_argument("hardness_statistics: need n >= 2 and samples >= 1");
  const FourierPlan<double> plan(n);
  HardnessStatistics st;
  st.samples = samples;
  double sum = 0, sum_sq = 0;
  ComplexVector x(n);
  for (int t = 0; t < samples; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    for (int k = 0; k < n; ++k) x[k] = rng.bernoulli(delta) ? -1.0 : 1.0;
    const ComplexVector spec = plan.forward(x);
    MagnitudeData m{n, RealVector(n / 2 + 1)};
    for (int q = 0; q <= n / 2; ++q) m.sq[q] = std::norm(spec[q]);
    const double h = hardness_index(m).h;
    if (h <= 0) {
      ++st.zero_count;
      continue;
    }
    const double l = std::log(h);
    sum += l;
    sum_sq += l * l;
  }
  const int used = samples - st.zero_count;
  if (st.zero_count > 0 || used == 0) {
    st.mean_log_h = -std::numeric_limits<double>::infinity();
    st.variance_log_h = std::numeric_limits<double>::quiet_NaN();
    return st;
  }
  st.mean_log_h = sum / used;
  st.variance_log_h = used > 1 ? (sum_sq - used * st.mean_log_h * st.mean_log_h) / (used - 1) : 0.0;
  return st;
}

}  // namespace bitret
