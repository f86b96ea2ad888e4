#include "bitret/instances.hpp"
#include "bitret/random.hpp"
#include "bitret/symmetric.hpp"
#include "unit/oracles.hpp"

#include <gtest/gtest.h>

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <numbers>

using namespace bitret;
using Rational = boost::multiprecision::mpq_rational;

namespace {

BigMatrix big(std::initializer_list<std::initializer_list<long>> rows) {
  BigMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows.begin()->size()));
  int i = 0;
  for (auto& r : rows) {
    int j = 0;
    for (long v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

// Fraction-free Gaussian elimination.
BigInt determinant(BigMatrix m) {
  const int n = static_cast<int>(m.rows());
  BigInt prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m(k, k) == 0) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i)
        if (m(i, k) != 0) swap = i;
      if (swap < 0) return 0;
      m.row(k).swap(m.row(swap));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

BigMatrix product(const BigMatrix& a, const BigMatrix& b) {
  BigMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      BigInt acc = 0;
      for (int k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      c(i, j) = acc;
    }
  return c;
}

// Exact Gram-Schmidt check of size reduction and the Lovasz condition.
void expect_lll_reduced(const BigMatrix& b, const Rational& delta) {
  const int n = static_cast<int>(b.rows()), d = static_cast<int>(b.cols());
  std::vector<std::vector<Rational>> star(static_cast<std::size_t>(n), std::vector<Rational>(d));
  std::vector<Rational> norms(static_cast<std::size_t>(n));
  std::vector<std::vector<Rational>> mu(static_cast<std::size_t>(n), std::vector<Rational>(n));
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) star[i][c] = Rational(b(i, c));
    for (int j = 0; j < i; ++j) {
      Rational dot = 0;
      for (int c = 0; c < d; ++c) dot += Rational(b(i, c)) * star[j][c];
      mu[i][j] = dot / norms[j];
      for (int c = 0; c < d; ++c) star[i][c] -= mu[i][j] * star[j][c];
    }
    norms[i] = 0;
    for (int c = 0; c < d; ++c) norms[i] += star[i][c] * star[i][c];
  }
  for (int i = 1; i < n; ++i) {
    for (int j = 0; j < i; ++j) EXPECT_LE(abs(mu[i][j]), Rational(1, 2)) << i << "," << j;
    EXPECT_GE(norms[i], (delta - mu[i][i - 1] * mu[i][i - 1]) * norms[i - 1]) << "row " << i;
  }
}

double row_norm(const BigMatrix& m, int i) {
  double s = 0;
  for (int c = 0; c < m.cols(); ++c) s += std::pow(m(i, c).convert_to<double>(), 2);
  return std::sqrt(s);
}

Instance symmetric_instance(int n) { return make_instance(gen_legendre(n), InstanceKind::Exact); }

}  // namespace

TEST(Mod2, SmallExample) {
  const SignSequence s{-1, 1, 1, 1, 1};
  const Autocorrelation a = autocorrelate(s);
  EXPECT_EQ(oracle::to_vector(a), (std::vector<long>{5, 1, 1, 1, 1}));
  const BitSequence b = solve_symmetric_mod2(a);
  EXPECT_EQ(b.support(), (std::vector<int>{0}));
  EXPECT_EQ(SignSequence::from_bits(b), s);
}

TEST(Mod2, AllOnes) {
  for (int n : {5, 7, 11, 13}) EXPECT_EQ(solve_symmetric_mod2(autocorrelate(SignSequence::ones(n))).weight(), 0);
}

TEST(Mod2, LegendreThirteen) {
  const SignSequence s = gen_legendre(13);
  const SignSequence r = SignSequence::from_bits(solve_symmetric_mod2(autocorrelate(s)));
  EXPECT_EQ(canonical_orbit_rep(r), canonical_orbit_rep(s));
}

TEST(Mod2, InvertsEverySymmetricSequence) {
  for (int n : {5, 7, 11, 13}) {
    const int m = (n + 1) / 2;
    for (int mask = 0; mask < (1 << m); ++mask) {
      Eigen::VectorXi half(m);
      for (int k = 0; k < m; ++k) half[k] = (mask >> k) & 1 ? -1 : 1;
      const SignSequence s = symmetric_completion(half, n);
      ASSERT_TRUE(is_reflection_symmetric(s));
      const Autocorrelation a = autocorrelate(s);
      const SignSequence r = SignSequence::from_bits(solve_symmetric_mod2(a));
      EXPECT_EQ(autocorrelate(r), a) << "n=" << n << " mask=" << mask;
      EXPECT_TRUE(is_reflection_symmetric(r));
      EXPECT_EQ(canonical_orbit_rep(r), canonical_orbit_rep(s)) << "n=" << n << " mask=" << mask;
    }
  }
}

TEST(Mod2, RejectsMalformedInput) {
  EXPECT_THROW(solve_symmetric_mod2(autocorrelate(SignSequence::ones(9))), std::invalid_argument);
  IntVector a(5);
  a << 5, 5, 1, 1, 5;  // sum 17
  EXPECT_THROW(solve_symmetric_mod2(a), std::invalid_argument);
}

TEST(LatticeBasis, BlockStructure) {
  const int n = 13, m = 7, p = 10;
  const SignSequence s = gen_legendre(n);
  const LatticeBasis basis = build_lattice_basis(autocorrelate(s), p);
  ASSERT_EQ(basis.rows.rows(), 2 * m);
  ASSERT_EQ(basis.rows.cols(), 2 * m);
  EXPECT_EQ(basis.m, m);
  EXPECT_EQ(basis.scale, BigInt(1) << p);
  const double k_scale = std::ldexp(1.0, p);
  const auto mags = magnitudes_of(s);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < 2 * m; ++j) {
      if (j == i) {
        const double expected = -k_scale * std::sqrt(n * mags.sq[i]);
        EXPECT_LE(std::abs(basis.rows(i, j).convert_to<double>() - expected), 0.5 + 1e-9);
      } else {
        EXPECT_EQ(basis.rows(i, j), 0);
      }
    }
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j) {
      EXPECT_EQ(basis.rows(m + k, m + j), k == j ? 1 : 0);
      const double c = k == 0 ? 1.0 : 2 * std::cos(2 * std::numbers::pi * k * j / n);
      const BigInt& entry = basis.rows(m + k, j);
      EXPECT_LE(std::abs(entry.convert_to<double>() - k_scale * c), 0.5 + 1e-9);
      EXPECT_LE(abs(entry), 2 * basis.scale + 1);
    }
  EXPECT_THROW(build_lattice_basis(autocorrelate(s), kMaxLatticeBits + 1), std::invalid_argument);
  EXPECT_THROW(build_lattice_basis(autocorrelate(SignSequence::ones(10)), 4), std::invalid_argument);
}

TEST(LatticeBasis, ShortGeneratorsOfThePlantedSolution) {
  for (int n : {13, 17, 29}) {
    const int m = (n + 1) / 2;
    const SignSequence s = gen_legendre(n);
    for (int p : {4, 12, 40, 80}) {
      const LatticeBasis basis = build_lattice_basis(autocorrelate(s), p);
      const ComplexVector f = dft(s.as_real());
      for (int q = 0; q < m; ++q) {
        BigInt v1 = 0, vs = 0;
        for (int k = 0; k < m; ++k) {
          v1 += basis.rows(m + k, q);
          vs += s[k] * basis.rows(m + k, q);
        }
        vs += (f[q].real() >= 0 ? 1 : -1) * basis.rows(q, q);
        if (q != 0) EXPECT_LE(abs(v1), m) << "n=" << n << " p=" << p << " q=" << q;
        EXPECT_LE(abs(vs), m + 1) << "n=" << n << " p=" << p << " q=" << q;
        if (q == 0 && p == 12) RecordProperty("v1_q0_n" + std::to_string(n), v1.str());
      }
    }
  }
}

TEST(LatticeBasis, HighPrecisionAgreesWithDoubleAtLowPrecision) {
  const SignSequence s = gen_legendre(17);
  for (int p : {2, 8, 20}) {
    const LatticeBasis exact = build_lattice_basis(autocorrelate(s), p);
    const LatticeBasis approx = build_lattice_basis(magnitudes_of(s), p);
    EXPECT_EQ(exact.rows, approx.rows) << "p=" << p;
  }
}

TEST(Lll, IdentityAndTwoByTwo) {
  const BigMatrix id = big({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  EXPECT_EQ(lll_reduce(id).reduced, id);
  EXPECT_EQ(lll_reduce(big({{1, 0}, {4, 1}})).reduced, big({{1, 0}, {0, 1}}));
}

TEST(Lll, DependentRowsThrow) {
  EXPECT_THROW(lll_reduce(big({{1, 2}, {2, 4}})), std::invalid_argument);
}

TEST(Lll, ScrambledBasisAgainstEnumeration) {
  Rng rng(3);
  const int dim = 6;
  for (int trial = 0; trial < 4; ++trial) {
    BigMatrix known(dim, dim);
    do {
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) known(i, j) = static_cast<long>(rng.below(11)) - 5;
    } while (determinant(known) == 0);
    BigMatrix unimodular = BigMatrix::Identity(dim, dim);
    for (int op = 0; op < 40; ++op) {
      const int i = static_cast<int>(rng.below(dim));
      int j = static_cast<int>(rng.below(dim - 1));
      if (j >= i) ++j;
      const long c = static_cast<long>(rng.below(7)) - 3;
      unimodular.row(i) += BigInt(c) * unimodular.row(j);
    }
    ASSERT_EQ(abs(determinant(unimodular)), 1);
    const BigMatrix scrambled = product(unimodular, known);

    // Shortest nonzero combination of the known rows, coefficients in [-5, 5].
    double shortest = std::numeric_limits<double>::infinity();
    std::vector<int> c(dim, -5);
    Eigen::MatrixXd kd(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) kd(i, j) = known(i, j).convert_to<double>();
    for (;;) {
      Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(dim);
      bool zero = true;
      for (int i = 0; i < dim; ++i) {
        v += c[i] * kd.row(i);
        zero = zero && c[i] == 0;
      }
      if (!zero) shortest = std::min(shortest, v.norm());
      int pos = 0;
      while (pos < dim && ++c[pos] > 5) c[pos++] = -5;
      if (pos == dim) break;
    }

    const LllResult strong = lll_reduce(scrambled, 99, 100, true);
    EXPECT_LE(row_norm(strong.reduced, 0), std::pow(2.0, (dim - 1) / 4.0) * shortest + 1e-9);
    const LllResult classic = lll_reduce(scrambled, 3, 4, true);
    EXPECT_LE(row_norm(classic.reduced, 0), std::pow(2.0, (dim - 1) / 2.0) * shortest + 1e-9);

    for (const LllResult* r : {&strong, &classic}) {
      EXPECT_EQ(product(r->transform, scrambled), r->reduced);
      EXPECT_EQ(abs(determinant(r->transform)), 1);
      EXPECT_EQ(abs(determinant(r->reduced)), abs(determinant(known)));
    }
    expect_lll_reduced(strong.reduced, Rational(99, 100));
    expect_lll_reduced(classic.reduced, Rational(3, 4));
  }
}

TEST(Lll, ReducesLatticeBasisExactly) {
  const LatticeBasis basis = build_lattice_basis(autocorrelate(gen_legendre(13)), 6);
  const LllResult r = lll_reduce(basis.rows, 3, 4, true);
  EXPECT_EQ(product(r.transform, basis.rows), r.reduced);
  EXPECT_EQ(abs(determinant(r.transform)), 1);
  EXPECT_EQ(abs(determinant(r.reduced)), abs(determinant(basis.rows)));
  expect_lll_reduced(r.reduced, Rational(3, 4));
}

TEST(SymmetricLll, ThirteenSucceedsAtSmallPrecision) {
  const SignSequence s = gen_legendre(13);
  const Instance inst = symmetric_instance(13);
  bool any = false;
  for (int p = 1; p <= 8 && !any; ++p) {
    const ReductionReport r = solve_symmetric_lll(inst, p, s);
    ASSERT_TRUE(r.span_criterion.has_value());
    if (r.succeeded) {
      any = true;
      ASSERT_TRUE(r.found_solution.has_value());
      EXPECT_TRUE(verify(*r.found_solution, inst));
      EXPECT_TRUE(is_reflection_symmetric(*r.found_solution));
    }
  }
  EXPECT_TRUE(any);
}

TEST(SymmetricLll, MinimalPrecisionGrowsWithLength) {
  int previous = 0;
  for (int n : {13, 17, 29, 37}) {
    const std::optional<int> p = minimal_lattice_bits(symmetric_instance(n), 16);
    ASSERT_TRUE(p.has_value()) << "n=" << n;
    EXPECT_GE(*p, previous) << "n=" << n;
    previous = *p;
  }
}

TEST(SymmetricLll, NoisyThirteenSucceeds) {
  const SignSequence s = gen_legendre(13);
  const Autocorrelation a = autocorrelate(s);
  const Instance noisy = apply_noise(a, hadamard_noise(a));
  bool any = false;
  for (int p = 1; p <= 5; ++p) {
    const ReductionReport r = solve_symmetric_lll(noisy, p);
    if (r.succeeded) {
      any = true;
      EXPECT_TRUE(verify(*r.found_solution, noisy));
    }
  }
  EXPECT_TRUE(any);
}

TEST(SymmetricLll, FoundSolutionsAlwaysVerify) {
  for (int n : {13, 17, 29}) {
    const Instance inst = symmetric_instance(n);
    for (int p = 1; p <= 6; ++p) {
      const ReductionReport r = solve_symmetric_lll(inst, p);
      EXPECT_EQ(r.succeeded, r.found_solution.has_value());
      if (r.found_solution) EXPECT_TRUE(verify(*r.found_solution, inst));
    }
  }
}

TEST(SymmetricLll, RejectsEvenLength) {
  const Instance inst = make_instance(gen_random(12, 0.5, 1), InstanceKind::Exact);
  EXPECT_THROW(solve_symmetric_lll(inst, 4), std::invalid_argument);
}

TEST(SymmetricCompletion, MirrorsHalf) {
  Eigen::VectorXi half(3);
  half << 1, -1, -1;
  const SignSequence s = symmetric_completion(half, 5);
  EXPECT_EQ(s, (SignSequence{1, -1, -1, -1, -1}));
  EXPECT_TRUE(is_reflection_symmetric(s));
  EXPECT_FALSE(is_reflection_symmetric(SignSequence{1, -1, 1, 1, 1}));
}
