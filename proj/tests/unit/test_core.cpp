#include "bitret/core.hpp"
#include "bitret/instances.hpp"
#include "bitret/random.hpp"
#include "unit/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace bitret;

namespace {

IntVector iv(std::initializer_list<std::int64_t> v) {
  IntVector out(static_cast<int>(v.size()));
  int i = 0;
  for (auto x : v) out[i++] = x;
  return out;
}

SignSequence random_signs(int n, Rng& rng) {
  Eigen::VectorXi v(n);
  for (int k = 0; k < n; ++k) v[k] = rng.sign();
  return SignSequence(v);
}

NoisePattern random_noise(int n, Rng& rng) {
  std::vector<int> half(static_cast<std::size_t>(n / 2));
  for (int& e : half) e = 2 * rng.sign();
  return noise_from_half(n, half);
}

}  // namespace

TEST(Autocorrelate, AllOnes) {
  EXPECT_EQ(autocorrelate(SignSequence::ones(5)), iv({5, 5, 5, 5, 5}));
}

TEST(Autocorrelate, ShortAlternating) {
  EXPECT_EQ(autocorrelate(SignSequence{1, -1, 1}), iv({3, -1, -1}));
}

TEST(Autocorrelate, MatchesDirectSumForRandomSequences) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(40));
    const SignSequence s = random_signs(n, rng);
    EXPECT_EQ(oracle::to_vector(autocorrelate(s)), oracle::autocorrelation(oracle::signs_of(s)));
  }
}

TEST(Autocorrelate, HomometricPairOfLength13) {
  const SignSequence s = SignSequence::from_bits(BitSequence::from_support(13, {0, 2, 3, 4, 5, 6, 7, 10, 11}));
  const SignSequence t = SignSequence::from_bits(BitSequence::from_support(13, {0, 2, 3, 4, 7, 9, 10, 11, 12}));
  EXPECT_EQ(autocorrelate(s), autocorrelate(t));
  EXPECT_NE(canonical_orbit_rep(s), canonical_orbit_rep(t));
}

TEST(Autocorrelate, InvariantsHoldForRandomOddLengths) {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 3 + 2 * static_cast<int>(rng.below(6));
    const SignSequence s = random_signs(n, rng);
    const Autocorrelation a = autocorrelate(s);
    EXPECT_EQ(a[0], n);
    for (int k = 1; k < n; ++k) {
      EXPECT_EQ(a[k], a[n - k]);
      EXPECT_EQ(((a[k] - n) % 4 + 4) % 4, 0);
    }
    EXPECT_EQ(a.sum(), static_cast<std::int64_t>(s.sum()) * s.sum());
    EXPECT_NO_THROW(check_autocorrelation(a));
    EXPECT_TRUE(verify(s, make_exact(a)));
  }
}

TEST(BitAutocorrelate, Examples) {
  EXPECT_EQ(bit_autocorrelate(BitSequence::from_support(5, {0, 1, 2})), iv({3, 2, 1, 1, 2}));
  EXPECT_EQ(bit_autocorrelate(BitSequence::from_support(6, {})), iv({0, 0, 0, 0, 0, 0}));
  EXPECT_EQ(bit_autocorrelate(BitSequence::from_support(7, {0, 2})), iv({2, 0, 1, 0, 0, 1, 0}));
}

TEST(BitAutocorrelate, SumOfOffPeakValues) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 5 + static_cast<int>(rng.below(30));
    const BitSequence b = BitSequence::from_signs(random_signs(n, rng));
    const IntVector ap = bit_autocorrelate(b);
    const std::int64_t k = b.weight();
    EXPECT_EQ(ap[0], k);
    EXPECT_EQ(ap.sum() - ap[0], k * (k - 1));
  }
}

TEST(BitAutocorrelate, SignDuality) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(30));
    const SignSequence s = random_signs(n, rng);
    const Autocorrelation a = autocorrelate(s);
    const IntVector ap = bit_autocorrelate(BitSequence::from_signs(s));
    for (int k = 1; k < n; ++k) EXPECT_EQ(4 * ap[k], a[k] + n - 2 * s.sum()) << "n=" << n << " k=" << k;
  }
}

TEST(ApplyNoise, Examples) {
  const Instance all_up = apply_noise(iv({5, 5, 5, 5, 5}), iv({0, 2, 2, 2, 2}));
  EXPECT_EQ(all_up.kind, InstanceKind::Noisy);
  EXPECT_EQ(all_up.autocorrelation, iv({5, 7, 7, 7, 7}));

  const Autocorrelation perfect = autocorrelate(gen_legendre(7));
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const Instance noisy = apply_noise(perfect, random_noise(7, rng));
    for (int k = 1; k < 7; ++k) EXPECT_TRUE(noisy.autocorrelation[k] == -3 || noisy.autocorrelation[k] == 1);
  }

  const Autocorrelation symmetric = autocorrelate(gen_legendre(13));
  const Instance flat = apply_noise(symmetric, hadamard_noise(symmetric));
  for (int k = 1; k < 13; ++k) EXPECT_EQ(flat.autocorrelation[k], -1);
}

TEST(ApplyNoise, LengthMismatchThrows) {
  EXPECT_THROW(apply_noise(iv({5, 5, 5, 5, 5}), iv({0, 2, 2})), std::invalid_argument);
}

TEST(NoisePattern, RejectsInvalid) {
  EXPECT_THROW(check_noise_pattern(iv({2, 2, 2})), std::invalid_argument);
  EXPECT_THROW(check_noise_pattern(iv({0, 2, -2})), std::invalid_argument);
  EXPECT_THROW(check_noise_pattern(iv({0, 1, 1})), std::invalid_argument);
  EXPECT_NO_THROW(check_noise_pattern(iv({0, -2, 2, -2})));
}

TEST(Verify, NoisyAcceptsOwnSequence) {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(20));
    const SignSequence s = random_signs(n, rng);
    EXPECT_TRUE(verify(s, apply_noise(autocorrelate(s), random_noise(n, rng))));
  }
}

TEST(Verify, NoisyMatchesExistenceTest) {
  // Direct check: some valid e' has n = a' + e'.
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(9));
    const SignSequence s = random_signs(n, rng);
    const Instance noisy = apply_noise(autocorrelate(s), random_noise(n, rng));
    const SignSequence c = random_signs(n, rng);
    const auto a = oracle::autocorrelation(oracle::signs_of(c));
    bool exists = false;
    for (std::uint64_t m = 0; m < (1ULL << (n / 2)) && !exists; ++m) {
      std::vector<int> half(static_cast<std::size_t>(n / 2));
      for (int k = 0; k < n / 2; ++k) half[k] = (m >> k) & 1 ? 2 : -2;
      const NoisePattern e = noise_from_half(n, half);
      bool ok = true;
      for (int k = 0; k < n; ++k) ok = ok && noisy.autocorrelation[k] == a[k] + e[k];
      exists = ok;
    }
    EXPECT_EQ(verify(c, noisy), exists);
  }
}

TEST(Verify, ExactRejectsOtherOrbit) {
  const SignSequence s = SignSequence::from_bits(BitSequence::from_support(13, {0, 2, 3, 4, 5, 6, 7, 10, 11}));
  EXPECT_FALSE(verify(s.flipped(1), make_exact(autocorrelate(s))));
}

TEST(Verify, LengthMismatchThrows) {
  EXPECT_THROW(verify(SignSequence::ones(5), make_exact(autocorrelate(SignSequence::ones(7)))),
               std::invalid_argument);
}

TEST(FlipCompatible, UnchangedAutocorrelationIsCompatible) {
  Rng rng(4);
  int checked = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 4 + static_cast<int>(rng.below(6));
    const SignSequence s = random_signs(n, rng);
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    if (autocorrelate(s.flipped(j)) != autocorrelate(s)) continue;
    ++checked;
    EXPECT_TRUE(flip_compatible(s, random_noise(n, rng), j));
  }
  EXPECT_GT(checked, 0);
}

TEST(FlipCompatible, MatchesVerifyDefinition) {
  Rng rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(12));
    const SignSequence s = random_signs(n, rng);
    const NoisePattern e = random_noise(n, rng);
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    EXPECT_EQ(flip_compatible(s, e, j), verify(s.flipped(j), apply_noise(autocorrelate(s), e)));
  }
}

TEST(FlipCompatible, IndexOutOfRangeThrows) {
  EXPECT_THROW(flip_compatible(SignSequence::ones(5), iv({0, 2, 2, 2, 2}), 5), std::out_of_range);
}

TEST(FlipProbability, ExhaustiveMatchesClosedForm) {
  const auto p5 = flip_probability_exhaustive(5);
  EXPECT_EQ(p5.numerator, 9u);
  EXPECT_EQ(p5.denominator, 16u);
  const auto p7 = flip_probability_exhaustive(7);
  EXPECT_EQ(p7.numerator, 27u);
  EXPECT_EQ(p7.denominator, 64u);
  const auto p6 = flip_probability_exhaustive(6);
  EXPECT_EQ(p6.numerator, 9u);
  EXPECT_EQ(p6.denominator, 32u);
  const auto p3 = flip_probability_exhaustive(3);
  EXPECT_EQ(p3.numerator, 3u);
  EXPECT_EQ(p3.denominator, 4u);
  for (int n : {3, 5, 6, 7}) EXPECT_NEAR(flip_probability_exhaustive(n).value(), flip_probability_theory(n), 1e-15);
}

TEST(FlipProbability, ExhaustiveIndependentOfFlipIndex) {
  for (int j = 0; j < 5; ++j) EXPECT_EQ(flip_probability_exhaustive(5, j).numerator, 9u);
}

TEST(FlipProbability, ExhaustiveAgreesWithDirectCount) {
  // Enumerates (s, e) with the oracle autocorrelation.
  const int n = 5;
  std::uint64_t hits = 0, total = 0;
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    const auto s = oracle::from_mask(mask, n);
    auto t = s;
    t[0] = -t[0];
    const auto a = oracle::autocorrelation(s);
    const auto b = oracle::autocorrelation(t);
    for (std::uint64_t m = 0; m < (1ULL << (n / 2)); ++m) {
      bool ok = true;
      for (int k = 1; k <= n / 2; ++k) {
        const long e = (m >> (k - 1)) & 1 ? 2 : -2;
        ok = ok && std::abs(a[k] + e - b[k]) == 2;
      }
      hits += ok;
      ++total;
    }
  }
  EXPECT_EQ(hits * 16, total * 9);
}

TEST(FlipProbability, MonteCarloWithinThreeStandardErrors) {
  for (int n : {9, 11}) {
    const FlipEstimate est = flip_probability_monte_carlo(n, 200'000, 77);
    EXPECT_EQ(est.trials, 200'000u);
    EXPECT_LT(std::abs(est.probability - flip_probability_theory(n)), 3 * est.std_error) << "n=" << n;
  }
}

TEST(CanonicalOrbitRep, AllOnes) {
  EXPECT_EQ(canonical_orbit_rep(SignSequence::ones(6)), SignSequence::ones(6).negated());
  EXPECT_EQ(orbit(SignSequence::ones(6)).size(), 2u);
}

TEST(CanonicalOrbitRep, LegendreSevenOrbit) {
  const SignSequence s = gen_legendre(7);
  const auto members = orbit(s);
  EXPECT_EQ(members.size(), 28u);
  std::set<SignSequence> reps;
  for (const auto& m : members) reps.insert(canonical_orbit_rep(m));
  EXPECT_EQ(reps.size(), 1u);
  EXPECT_EQ(oracle::orbit(oracle::signs_of(s)).size(), 28u);
}

TEST(CanonicalOrbitRep, InvariantAndIdempotent) {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(14));
    const SignSequence s = random_signs(n, rng);
    const SignSequence rep = canonical_orbit_rep(s);
    EXPECT_EQ(canonical_orbit_rep(rep), rep);
    EXPECT_EQ(oracle::signs_of(rep), oracle::orbit_min(oracle::signs_of(s)));
    for (int r = 0; r < n; ++r) {
      EXPECT_EQ(canonical_orbit_rep(s.shifted(r)), rep);
      EXPECT_EQ(canonical_orbit_rep(s.shifted(r).reflected()), rep);
      EXPECT_EQ(canonical_orbit_rep(s.shifted(r).negated()), rep);
      EXPECT_EQ(canonical_orbit_rep(s.reflected().negated().shifted(r)), rep);
    }
    std::set<oracle::Signs> mine;
    for (const auto& m : orbit(s)) mine.insert(oracle::signs_of(m));
    EXPECT_EQ(mine, oracle::orbit(oracle::signs_of(s)));
  }
}

TEST(SignSequence, ShiftAndReflectConventions) {
  const SignSequence s{1, -1, -1, 1, 1};
  const SignSequence r = s.shifted(2);
  for (int k = 0; k < 5; ++k) EXPECT_EQ(r[k], s[((k - 2) % 5 + 5) % 5]);
  const SignSequence f = s.reflected();
  for (int k = 0; k < 5; ++k) EXPECT_EQ(f[k], s[(5 - k) % 5]);
}

TEST(SignSequence, ParseForms) {
  EXPECT_EQ(SignSequence::parse("+-+"), (SignSequence{1, -1, 1}));
  EXPECT_EQ(SignSequence::parse("1,-1,1"), (SignSequence{1, -1, 1}));
  EXPECT_THROW(SignSequence::parse("1,0,1"), std::invalid_argument);
}

TEST(SignSequence, RejectsInvalidValues) {
  Eigen::VectorXi bad(3);
  bad << 1, 0, -1;
  EXPECT_THROW(SignSequence{bad}, std::invalid_argument);
  Eigen::VectorXi one(1);
  one << 1;
  EXPECT_THROW(SignSequence{one}, std::invalid_argument);
}

TEST(BitSequence, PairsWithSigns) {
  const SignSequence s{1, -1, -1, 1};
  const BitSequence b = BitSequence::from_signs(s);
  EXPECT_EQ(b.support(), (std::vector<int>{1, 2}));
  EXPECT_EQ(SignSequence::from_bits(b), s);
}

TEST(Instance, ValidateRejectsBrokenData) {
  EXPECT_THROW(make_exact(iv({4, 5, 5, 5, 5})), std::invalid_argument);
  EXPECT_THROW(make_exact(iv({5, 1, 5, 5, 5})), std::invalid_argument);
  EXPECT_THROW(make_exact(iv({5, 3, 3, 3, 3})), std::invalid_argument);
  EXPECT_NO_THROW(make_exact(iv({5, 3, 3, 3, 3}), true));
  EXPECT_THROW(make_noisy(iv({5, 5, 5, 5, 5})), std::invalid_argument);
  EXPECT_THROW(make_fixed_precision(RealVector::Ones(3), 5, 0.0), std::invalid_argument);
  EXPECT_THROW(make_fixed_precision(RealVector::Constant(3, -1.0), 5, 0.1), std::invalid_argument);
}
