#include "bitret/instances.hpp"

#include "bitret/random.hpp"
#include "bitret/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bitret {

namespace {

using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // These twelve bases are a deterministic witness set below 2^64.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

int legendre_symbol(std::int64_t a, std::int64_t p) {
  if (p < 3 || p % 2 == 0) throw std::invalid_argument("legendre_symbol: p must be an odd prime");
  std::int64_t r = ((a % p) + p) % p;
  if (r == 0) return 0;
  std::uint64_t e = pow_mod(static_cast<std::uint64_t>(r), static_cast<std::uint64_t>((p - 1) / 2),
                            static_cast<std::uint64_t>(p));
  return e == 1 ? 1 : -1;
}

SignSequence gen_random(int n, double delta, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_random: n must be at least 2");
  if (!(delta >= 0 && delta <= 1)) throw std::invalid_argument("gen_random: delta must be in [0,1]");
  Rng rng(seed);
  Eigen::VectorXi v(n);
  for (int k = 0; k < n; ++k) v[k] = rng.bernoulli(delta) ? -1 : 1;
  return SignSequence(std::move(v));
}

SignSequence gen_legendre(int n) {
  if (n < 3 || !is_prime(static_cast<std::uint64_t>(n)))
    throw std::invalid_argument("gen_legendre: n must be an odd prime");
  Eigen::VectorXi v(n);
  v[0] = 1;
  for (int k = 1; k < n; ++k) v[k] = legendre_symbol(k, n);
  return SignSequence(std::move(v));
}

AverageCaseResult gen_average_case(int n, int pool, std::uint64_t seed) {
  if (pool < 1) throw std::invalid_argument("gen_average_case: pool must be positive");
  std::vector<std::pair<double, int>> ranked;
  ranked.reserve(static_cast<std::size_t>(pool));
  for (int i = 0; i < pool; ++i) {
    const SignSequence s = gen_random(n, 0.5, derive_seed(seed, static_cast<std::uint64_t>(i)));
    ranked.emplace_back(hardness_index(s).h, i);
  }
  std::sort(ranked.begin(), ranked.end());
  const int window = std::max(1, pool / 10);
  const int start = (pool - window) / 2;
  Rng pick(derive_seed(seed, static_cast<std::uint64_t>(pool)));
  const auto& chosen = ranked[static_cast<std::size_t>(start + static_cast<int>(pick.below(window)))];
  return {gen_random(n, 0.5, derive_seed(seed, static_cast<std::uint64_t>(chosen.second))), chosen.first};
}

SparseResult gen_sparse(int n, int k_ones, std::uint64_t seed) {
  if (n < 2 || k_ones < 1 || k_ones > n) throw std::invalid_argument("gen_sparse: need 1 <= k_ones <= n");
  Rng rng(seed);
  std::vector<int> support{0};
  for (int v : rng.sample(n - 1, k_ones - 1)) support.push_back(v + 1);
  std::sort(support.begin(), support.end());
  BitSequence bits = BitSequence::from_support(n, support);
  return {bits, build_difference_instance(n, support)};
}

NoisePattern sample_noise(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_noise: n must be at least 2");
  Rng rng(seed);
  std::vector<int> half(static_cast<std::size_t>(n / 2));
  for (auto& x : half) x = 2 * rng.sign();
  return noise_from_half(n, half);
}

NoisePattern hadamard_noise(const Autocorrelation& a) {
  const int n = static_cast<int>(a.size());
  NoisePattern e = NoisePattern::Zero(n);
  for (int k = 1; k < n; ++k) e[k] = -1 - a[k];
  check_noise_pattern(e);
  return e;
}

Autocorrelation hadamard_targets(int n) {
  Autocorrelation a = Autocorrelation::Constant(n, -1);
  a[0] = n;
  return a;
}

Instance make_instance(const SignSequence& s, InstanceKind kind, std::optional<double> eta,
                       std::uint64_t noise_seed, std::optional<NoisePattern> noise) {
  Instance inst;
  switch (kind) {
    case InstanceKind::Exact:
      inst = make_exact(autocorrelate(s));
      break;
    case InstanceKind::Noisy:
      inst = apply_noise(autocorrelate(s), noise ? *noise : sample_noise(s.size(), noise_seed));
      inst.meta.raw = false;
      inst.validate();
      break;
    case InstanceKind::FixedPrecision:
      if (!eta) throw std::invalid_argument("make_instance: fixed-precision instances need eta");
      inst = make_fixed_precision(magnitudes_from_autocorrelation(autocorrelate(s)).sq, s.size(), *eta);
      break;
  }
  inst.planted = s;
  inst.meta.rng_id = kRngId;
  return inst;
}

int ones_for_multiplicity(int n, double mu) {
  const double k = (1.0 + std::sqrt(1.0 + 4.0 * mu * (n - 1))) / 2.0;
  return std::clamp(static_cast<int>(std::lround(k)), 1, n);
}

}  // namespace bitret
