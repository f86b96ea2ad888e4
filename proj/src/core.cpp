#include "bitret/core.hpp"

#include "bitret/random.hpp"
#include "bitret/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bitret {

namespace {

int mod(std::int64_t k, int n) {
  std::int64_t r = k % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

std::int64_t floor_mod4(std::int64_t v) { return ((v % 4) + 4) % 4; }

bool is_perfect_square(std::int64_t v) {
  if (v < 0) return false;
  auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
  for (std::int64_t c = std::max<std::int64_t>(0, r - 2); c <= r + 2; ++c)
    if (c * c == v) return true;
  return false;
}

void check_symmetric(const IntVector& a, const char* what) {
  const int n = static_cast<int>(a.size());
  for (int k = 1; k < n; ++k)
    if (a[k] != a[n - k])
      throw std::invalid_argument(std::string(what) + ": not reflection symmetric at k=" + std::to_string(k));
}

}  // namespace

SignSequence::SignSequence(Eigen::VectorXi values) : values_(std::move(values)) {
  if (values_.size() < 2) throw std::invalid_argument("SignSequence: length must be at least 2");
  for (Eigen::Index k = 0; k < values_.size(); ++k)
    if (values_[k] != 1 && values_[k] != -1)
      throw std::invalid_argument("SignSequence: entry " + std::to_string(k) + " is not +-1");
}

SignSequence::SignSequence(std::initializer_list<int> values)
    : SignSequence(Eigen::Map<const Eigen::VectorXi>(values.begin(), static_cast<Eigen::Index>(values.size()))) {}

SignSequence SignSequence::ones(int n) { return SignSequence(Eigen::VectorXi::Ones(n)); }

SignSequence SignSequence::from_bits(const BitSequence& b) {
  return SignSequence((Eigen::VectorXi::Ones(b.size()) - 2 * b.values()).eval());
}

SignSequence SignSequence::parse(const std::string& text) {
  std::vector<int> v;
  if (text.find_first_of("0123456789") == std::string::npos) {
    for (char c : text) {
      if (c == '+') v.push_back(1);
      else if (c == '-') v.push_back(-1);
      else if (!std::isspace(static_cast<unsigned char>(c)))
        throw std::invalid_argument("SignSequence::parse: unexpected character");
    }
  } else {
    std::string token;
    std::stringstream ss(text);
    while (std::getline(ss, token, ',')) v.push_back(std::stoi(token));
  }
  return SignSequence(Eigen::Map<Eigen::VectorXi>(v.data(), static_cast<Eigen::Index>(v.size())));
}

SignSequence SignSequence::flipped(int j) const {
  if (j < 0 || j >= size()) throw std::out_of_range("SignSequence::flipped: index out of range");
  SignSequence r = *this;
  r.values_[j] = -r.values_[j];
  return r;
}

SignSequence SignSequence::shifted(int shift) const {
  const int n = size();
  Eigen::VectorXi v(n);
  for (int k = 0; k < n; ++k) v[k] = values_[mod(static_cast<std::int64_t>(k) - shift, n)];
  SignSequence r;
  r.values_ = std::move(v);
  return r;
}

SignSequence SignSequence::reflected() const {
  const int n = size();
  SignSequence r = *this;
  for (int k = 1; k < n; ++k) r.values_[k] = values_[n - k];
  return r;
}

SignSequence SignSequence::negated() const {
  SignSequence r = *this;
  r.values_ = -values_;
  return r;
}

std::string SignSequence::to_string() const {
  std::string out;
  out.reserve(static_cast<std::size_t>(size()));
  for (int k = 0; k < size(); ++k) out.push_back(values_[k] > 0 ? '+' : '-');
  return out;
}

std::strong_ordering operator<=>(const SignSequence& a, const SignSequence& b) {
  const int n = std::min(a.size(), b.size());
  for (int k = 0; k < n; ++k)
    if (a[k] != b[k]) return a[k] < b[k] ? std::strong_ordering::less : std::strong_ordering::greater;
  return a.size() <=> b.size();
}

BitSequence::BitSequence(Eigen::VectorXi values) : values_(std::move(values)) {
  if (values_.size() < 1) throw std::invalid_argument("BitSequence: empty");
  for (Eigen::Index k = 0; k < values_.size(); ++k)
    if (values_[k] != 0 && values_[k] != 1)
      throw std::invalid_argument("BitSequence: entry " + std::to_string(k) + " is not 0/1");
}

BitSequence BitSequence::from_signs(const SignSequence& s) {
  return BitSequence(((Eigen::VectorXi::Ones(s.size()) - s.values()) / 2).eval());
}

BitSequence BitSequence::from_support(int n, const std::vector<int>& support) {
  Eigen::VectorXi v = Eigen::VectorXi::Zero(n);
  for (int k : support) {
    if (k < 0 || k >= n) throw std::out_of_range("BitSequence::from_support: index out of range");
    v[k] = 1;
  }
  return BitSequence(std::move(v));
}

std::vector<int> BitSequence::support() const {
  std::vector<int> out;
  for (int k = 0; k < size(); ++k)
    if (values_[k]) out.push_back(k);
  return out;
}

std::string to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::Exact: return "exact";
    case InstanceKind::Noisy: return "noisy";
    case InstanceKind::FixedPrecision: return "fixed_precision";
  }
  return "exact";
}

InstanceKind parse_instance_kind(const std::string& text) {
  if (text == "exact") return InstanceKind::Exact;
  if (text == "noisy") return InstanceKind::Noisy;
  if (text == "fixed_precision") return InstanceKind::FixedPrecision;
  throw std::invalid_argument("unknown instance kind '" + text + "'");
}

void check_autocorrelation(const Autocorrelation& a, bool raw) {
  const int n = static_cast<int>(a.size());
  if (n < 2) throw std::invalid_argument("autocorrelation: length must be at least 2");
  if (a[0] != n) throw std::invalid_argument("autocorrelation: a_0 must equal n");
  check_symmetric(a, "autocorrelation");
  if (raw) return;
  for (int k = 0; k < n; ++k)
    if (floor_mod4(a[k] - n) != 0)
      throw std::invalid_argument("autocorrelation: a_" + std::to_string(k) + " is not congruent to n mod 4");
  if (!is_perfect_square(a.sum())) throw std::invalid_argument("autocorrelation: sum is not a perfect square");
}

void check_noise_pattern(const NoisePattern& e) {
  const int n = static_cast<int>(e.size());
  if (n < 2) throw std::invalid_argument("noise pattern: length must be at least 2");
  if (e[0] != 0) throw std::invalid_argument("noise pattern: e_0 must be 0");
  check_symmetric(e, "noise pattern");
  for (int k = 1; k < n; ++k)
    if (e[k] != 2 && e[k] != -2)
      throw std::invalid_argument("noise pattern: e_" + std::to_string(k) + " is not +-2");
}

void Instance::validate() const {
  if (n < 2) throw std::invalid_argument("instance: n must be at least 2");
  switch (kind) {
    case InstanceKind::Exact:
      if (autocorrelation.size() != n) throw std::invalid_argument("instance: autocorrelation length != n");
      check_autocorrelation(autocorrelation, meta.raw);
      break;
    case InstanceKind::Noisy: {
      if (autocorrelation.size() != n) throw std::invalid_argument("instance: autocorrelation length != n");
      if (autocorrelation[0] != n) throw std::invalid_argument("noisy instance: n_0 must equal n");
      check_symmetric(autocorrelation, "noisy instance");
      if (!meta.raw)
        for (int k = 1; k < n; ++k)
          if (floor_mod4(autocorrelation[k] - n - 2) != 0)
            throw std::invalid_argument("noisy instance: n_" + std::to_string(k) + " is not congruent to n+2 mod 4");
      break;
    }
    case InstanceKind::FixedPrecision:
      if (!(eta > 0)) throw std::invalid_argument("fixed-precision instance: eta must be positive");
      if (sq_magnitudes.size() != n / 2 + 1)
        throw std::invalid_argument("fixed-precision instance: need n/2+1 squared magnitudes");
      for (Eigen::Index q = 0; q < sq_magnitudes.size(); ++q)
        if (sq_magnitudes[q] < -eta)
          throw std::invalid_argument("fixed-precision instance: magnitude " + std::to_string(q) + " below -eta");
      break;
  }
  if (planted && planted->size() != n) throw std::invalid_argument("instance: planted solution length != n");
}

Instance make_exact(const Autocorrelation& a, bool raw) {
  Instance inst;
  inst.kind = InstanceKind::Exact;
  inst.n = static_cast<int>(a.size());
  inst.autocorrelation = a;
  inst.meta.raw = raw;
  inst.validate();
  return inst;
}

Instance make_noisy(const IntVector& noisy, bool raw) {
  Instance inst;
  inst.kind = InstanceKind::Noisy;
  inst.n = static_cast<int>(noisy.size());
  inst.autocorrelation = noisy;
  inst.meta.raw = raw;
  inst.validate();
  return inst;
}

Instance make_fixed_precision(const RealVector& sq_magnitudes, int n, double eta) {
  Instance inst;
  inst.kind = InstanceKind::FixedPrecision;
  inst.n = n;
  inst.sq_magnitudes = sq_magnitudes;
  inst.eta = eta;
  inst.validate();
  return inst;
}

Autocorrelation autocorrelate(const SignSequence& s) {
  const int n = s.size();
  Autocorrelation a(n);
  const Eigen::VectorXi& v = s.values();
  for (int k = 0; k < n; ++k) {
    std::int64_t acc = 0;
    for (int l = 0; l < n; ++l) {
      int m = l - k;
      if (m < 0) m += n;
      acc += v[l] * v[m];
    }
    a[k] = acc;
  }
  return a;
}

IntVector bit_autocorrelate(const BitSequence& b) {
  const int n = b.size();
  IntVector a = IntVector::Zero(n);
  const std::vector<int> supp = b.support();
  for (int l : supp)
    for (int m : supp) a[mod(static_cast<std::int64_t>(l) - m, n)] += 1;
  return a;
}

Instance apply_noise(const Autocorrelation& a, const NoisePattern& e) {
  if (a.size() != e.size()) throw std::invalid_argument("apply_noise: length mismatch");
  check_noise_pattern(e);
  return make_noisy(a + e, true);
}

bool verify(const SignSequence& candidate, const Instance& instance) {
  if (candidate.size() != instance.n) throw std::invalid_argument("verify: length mismatch");
  switch (instance.kind) {
    case InstanceKind::Exact:
      return autocorrelate(candidate) == instance.autocorrelation;
    case InstanceKind::Noisy: {
      const Autocorrelation a = autocorrelate(candidate);
      if (a[0] != instance.autocorrelation[0]) return false;
      for (int k = 1; k < instance.n; ++k)
        if (std::abs(instance.autocorrelation[k] - a[k]) != 2) return false;
      return true;
    }
    case InstanceKind::FixedPrecision: {
      const MagnitudeData m = magnitudes_from_autocorrelation(autocorrelate(candidate));
      return ((m.sq - instance.sq_magnitudes).array().abs() < instance.eta).all();
    }
  }
  return false;
}

bool flip_compatible(const SignSequence& s, const NoisePattern& e, int j) {
  if (j < 0 || j >= s.size()) throw std::out_of_range("flip_compatible: index out of range");
  if (e.size() != s.size()) throw std::invalid_argument("flip_compatible: length mismatch");
  const Instance noisy = apply_noise(autocorrelate(s), e);
  return verify(s.flipped(j), noisy);
}

std::vector<SignSequence> orbit(const SignSequence& s) {
  std::vector<SignSequence> images;
  images.reserve(static_cast<std::size_t>(4 * s.size()));
  const SignSequence refl = s.reflected();
  for (int r = 0; r < s.size(); ++r) {
    for (const SignSequence* base : {&s, &refl}) {
      SignSequence img = base->shifted(r);
      images.push_back(img.negated());
      images.push_back(std::move(img));
    }
  }
  std::sort(images.begin(), images.end());
  images.erase(std::unique(images.begin(), images.end()), images.end());
  return images;
}

SignSequence canonical_orbit_rep(const SignSequence& s) {
  const int n = s.size();
  const SignSequence refl = s.reflected();
  SignSequence best = s;
  // Compare images in place to avoid materializing all 4n of them.
  auto image_less = [n](const SignSequence& base, int r, int sign, const SignSequence& cur) {
    for (int k = 0; k < n; ++k) {
      int v = sign * base[mod(static_cast<std::int64_t>(k) - r, n)];
      if (v != cur[k]) return v < cur[k];
    }
    return false;
  };
  for (const SignSequence* base : {&s, &refl})
    for (int r = 0; r < n; ++r)
      for (int sign : {1, -1})
        if (image_less(*base, r, sign, best)) {
          best = base->shifted(r);
          if (sign < 0) best = best.negated();
        }
  return best;
}

NoisePattern noise_from_half(int n, const std::vector<int>& half) {
  if (static_cast<int>(half.size()) != n / 2) throw std::invalid_argument("noise_from_half: need n/2 values");
  NoisePattern e = NoisePattern::Zero(n);
  for (int k = 1; k <= n / 2; ++k) {
    e[k] = half[k - 1];
    e[n - k] = half[k - 1];
  }
  check_noise_pattern(e);
  return e;
}

Fraction flip_probability_exhaustive(int n, int j) {
  if (n < 2 || n > 24) throw std::invalid_argument("flip_probability_exhaustive: need 2 <= n <= 24");
  if (j < 0 || j >= n) throw std::out_of_range("flip_probability_exhaustive: index out of range");
  const int h = n / 2;
  std::uint64_t hits = 0;
  const std::uint64_t total = (std::uint64_t{1} << n) << h;
  // A flip at j changes a_k by d_k; compatibility asks |e_k - d_k| = 2 for
  // k != 0, which is checked directly without rebuilding instances.
  Eigen::VectorXi v(n);
  for (std::uint64_t smask = 0; smask < (std::uint64_t{1} << n); ++smask) {
    for (int k = 0; k < n; ++k) v[k] = (smask >> k & 1) ? -1 : 1;
    const SignSequence s(v);
    const Autocorrelation a = autocorrelate(s);
    const Autocorrelation a2 = autocorrelate(s.flipped(j));
    for (std::uint64_t emask = 0; emask < (std::uint64_t{1} << h); ++emask) {
      bool ok = true;
      for (int k = 1; k <= h && ok; ++k) {
        std::int64_t e = (emask >> (k - 1) & 1) ? -2 : 2;
        ok = std::abs(a[k] + e - a2[k]) == 2;
      }
      hits += ok;
    }
  }
  std::uint64_t g = std::gcd(hits, total);
  return Fraction{hits / g, total / g};
}

FlipEstimate flip_probability_monte_carlo(int n, std::uint64_t trials, std::uint64_t seed, int j) {
  if (n < 2) throw std::invalid_argument("flip_probability_monte_carlo: need n >= 2");
  Rng rng(seed);
  std::uint64_t hits = 0;
  Eigen::VectorXi v(n);
  std::vector<int> half(static_cast<std::size_t>(n / 2));
  for (std::uint64_t t = 0; t < trials; ++t) {
    for (int k = 0; k < n; ++k) v[k] = rng.sign();
    for (auto& x : half) x = 2 * rng.sign();
    hits += flip_compatible(SignSequence(v), noise_from_half(n, half), j);
  }
  FlipEstimate est;
  est.trials = trials;
  est.probability = static_cast<double>(hits) / static_cast<double>(trials);
  est.std_error = std::sqrt(est.probability * (1 - est.probability) / static_cast<double>(trials));
  return est;
}

double flip_probability_theory(int n) {
  if (n % 2) return std::pow(0.75, (n - 1) / 2);
  return 0.5 * std::pow(0.75, n / 2 - 1);
}

}  // namespace bitret
