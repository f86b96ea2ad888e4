#include "bitret/symmetric.hpp"

#include "bitret/instances.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace bitret {

namespace mp = boost::multiprecision;
using HighFloat = mp::number<mp::cpp_bin_float<400, mp::digit_base_2>>;

namespace {

std::int64_t isqrt_exact(std::int64_t v) {
  if (v < 0) return -1;
  auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
  for (std::int64_t c = std::max<std::int64_t>(0, r - 2); c <= r + 2; ++c)
    if (c * c == v) return c;
  return -1;
}

void require_odd_prime(int n, const char* what) {
  if (n < 3 || n % 2 == 0 || !is_prime(static_cast<std::uint64_t>(n)))
    throw std::invalid_argument(std::string(what) + ": n must be an odd prime");
}

BigInt round_to_int(const HighFloat& x) {
  const mp::cpp_int rounded = static_cast<mp::cpp_int>(mp::round(x));
  return BigInt(rounded.str());
}

std::vector<HighFloat> cos_table(int n) {
  const HighFloat two_pi = 2 * boost::math::constants::pi<HighFloat>();
  std::vector<HighFloat> t(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) t[j] = mp::cos(two_pi * j / n);
  return t;
}

LatticeBasis assemble_basis(int n, int p_bits, const std::vector<HighFloat>& roots,
                            const std::vector<HighFloat>& cosines) {
  if (p_bits < 0 || p_bits > kMaxLatticeBits)
    throw std::invalid_argument("build_lattice_basis: p_bits must lie in [0, " + std::to_string(kMaxLatticeBits) + "]");
  LatticeBasis basis;
  basis.n = n;
  basis.m = (n + 1) / 2;
  basis.p_bits = p_bits;
  basis.scale = BigInt(1) << p_bits;
  const int m = basis.m;
  const HighFloat scale = mp::ldexp(HighFloat(1), p_bits);
  basis.rows = BigMatrix::Constant(2 * m, 2 * m, BigInt(0));
  for (int q = 0; q < m; ++q) basis.rows(q, q) = round_to_int(-scale * roots[q]);
  for (int k = 0; k < m; ++k) {
    for (int q = 0; q < m; ++q) {
      const HighFloat c = k == 0 ? HighFloat(1) : 2 * cosines[static_cast<std::size_t>(k) * q % n];
      basis.rows(m + k, q) = round_to_int(scale * c);
    }
    basis.rows(m + k, m + k) = 1;
  }
  return basis;
}

// Exact floor(a / b) for b > 0.
BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && (a < 0)) q -= 1;
  return q;
}

// Nearest integer to a / b for b > 0, halves rounded up.
BigInt round_div(const BigInt& a, const BigInt& b) { return floor_div(2 * a + b, 2 * b); }

}  // namespace

BitSequence solve_symmetric_mod2(const Autocorrelation& a) {
  const int n = static_cast<int>(a.size());
  require_odd_prime(n, "solve_symmetric_mod2");
  if (a[0] != n) throw std::invalid_argument("solve_symmetric_mod2: a_0 must equal n");
  const std::int64_t root = isqrt_exact(a.sum());
  if (root < 0) throw std::invalid_argument("solve_symmetric_mod2: sum of autocorrelation is not a perfect square");
  IntVector transformed(n);
  for (int k = 0; k < n; ++k) {
    const std::int64_t num = a[k] + n - 2 * root;
    if (num % 4 != 0) throw std::invalid_argument("solve_symmetric_mod2: transformed autocorrelation not integral");
    transformed[k] = num / 4;
  }
  Eigen::VectorXi bits(n);
  for (int k = 0; k < n; ++k) {
    const std::int64_t v = transformed[static_cast<Eigen::Index>(2 * static_cast<std::int64_t>(k) % n)];
    bits[k] = static_cast<int>(((v % 2) + 2) % 2);
  }
  BitSequence b(std::move(bits));
  Instance inst;
  inst.kind = InstanceKind::Exact;
  inst.n = n;
  inst.autocorrelation = a;
  if (!verify(SignSequence::from_bits(b), inst))
    throw std::invalid_argument("solve_symmetric_mod2: input is not the autocorrelation of a symmetric sequence");
  return b;
}

LatticeBasis build_lattice_basis(const Autocorrelation& a, int p_bits) {
  const int n = static_cast<int>(a.size());
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("build_lattice_basis: n must be odd");
  const auto cosines = cos_table(n);
  const int m = (n + 1) / 2;
  std::vector<HighFloat> roots(static_cast<std::size_t>(m));
  for (int q = 0; q < m; ++q) {
    HighFloat sum = 0;
    for (int k = 0; k < n; ++k) sum += HighFloat(a[k]) * cosines[static_cast<std::size_t>(k) * q % n];
    roots[q] = sum > 0 ? HighFloat(mp::sqrt(sum)) : HighFloat(0);
  }
  return assemble_basis(n, p_bits, roots, cosines);
}

LatticeBasis build_lattice_basis(const MagnitudeData& magnitudes, int p_bits) {
  const int n = magnitudes.n;
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("build_lattice_basis: n must be odd");
  const auto cosines = cos_table(n);
  const int m = (n + 1) / 2;
  std::vector<HighFloat> roots(static_cast<std::size_t>(m));
  for (int q = 0; q < m; ++q) roots[q] = mp::sqrt(HighFloat(n) * HighFloat(std::max(0.0, magnitudes.sq[q])));
  return assemble_basis(n, p_bits, roots, cosines);
}

LllResult lll_reduce(const BigMatrix& basis, long delta_num, long delta_den, bool track_transform) {
  if (!(4 * delta_num > delta_den && delta_num <= delta_den && delta_den > 0))
    throw std::invalid_argument("lll_reduce: delta must lie in (1/4, 1]");
  const int rows = static_cast<int>(basis.rows());
  const int cols = static_cast<int>(basis.cols());
  std::vector<std::vector<BigInt>> b(static_cast<std::size_t>(rows), std::vector<BigInt>(static_cast<std::size_t>(cols)));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) b[i][j] = basis(i, j);
  std::vector<std::vector<BigInt>> h;
  if (track_transform) {
    h.assign(static_cast<std::size_t>(rows), std::vector<BigInt>(static_cast<std::size_t>(rows), BigInt(0)));
    for (int i = 0; i < rows; ++i) h[i][i] = 1;
  }
  LllResult result;
  if (rows == 0) {
    result.reduced = basis;
    result.transform = BigMatrix(0, 0);
    return result;
  }

  auto dot = [&](int i, int j) {
    BigInt s = 0;
    for (int c = 0; c < cols; ++c) s += b[i][c] * b[j][c];
    return s;
  };
  // 1-based bookkeeping: d[0] = 1, d[i] is the Gram determinant of the
  // first i rows; lambda[i][j] = d[j] mu_ij.
  std::vector<BigInt> d(static_cast<std::size_t>(rows + 1));
  std::vector<std::vector<BigInt>> lambda(static_cast<std::size_t>(rows + 1),
                                          std::vector<BigInt>(static_cast<std::size_t>(rows + 1), BigInt(0)));
  auto row_sub = [&](int k, int l, const BigInt& r) {
    for (int c = 0; c < cols; ++c) b[k - 1][c] -= r * b[l - 1][c];
    if (track_transform)
      for (int c = 0; c < rows; ++c) h[k - 1][c] -= r * h[l - 1][c];
  };
  auto redi = [&](int k, int l) {
    if (2 * abs(lambda[k][l]) > d[l]) {
      const BigInt r = round_div(lambda[k][l], d[l]);
      row_sub(k, l, r);
      lambda[k][l] -= r * d[l];
      for (int i = 1; i < l; ++i) lambda[k][i] -= r * lambda[l][i];
    }
  };
  int kmax = 1;
  auto swapi = [&](int k) {
    std::swap(b[k - 1], b[k - 2]);
    if (track_transform) std::swap(h[k - 1], h[k - 2]);
    for (int j = 1; j <= k - 2; ++j) std::swap(lambda[k][j], lambda[k - 1][j]);
    const BigInt lam = lambda[k][k - 1];
    const BigInt big_b = (d[k - 2] * d[k] + lam * lam) / d[k - 1];
    for (int i = k + 1; i <= kmax; ++i) {
      const BigInt t = lambda[i][k];
      lambda[i][k] = (d[k] * lambda[i][k - 1] - lam * t) / d[k - 1];
      lambda[i][k - 1] = (big_b * t + lam * lambda[i][k]) / d[k];
    }
    d[k - 1] = big_b;
    ++result.swaps;
  };

  d[0] = 1;
  d[1] = dot(0, 0);
  if (d[1] == 0) throw std::invalid_argument("lll_reduce: rows are linearly dependent");
  int k = 2;
  while (k <= rows) {
    if (k > kmax) {
      kmax = k;
      for (int j = 1; j <= k; ++j) {
        BigInt u = dot(k - 1, j - 1);
        for (int i = 1; i < j; ++i) u = (d[i] * u - lambda[k][i] * lambda[j][i]) / d[i - 1];
        if (j < k) lambda[k][j] = u;
        else d[k] = u;
      }
      if (d[k] == 0) throw std::invalid_argument("lll_reduce: rows are linearly dependent");
    }
    redi(k, k - 1);
    if (delta_den * d[k] * d[k - 2] < delta_num * d[k - 1] * d[k - 1] - delta_den * lambda[k][k - 1] * lambda[k][k - 1]) {
      swapi(k);
      k = std::max(2, k - 1);
      continue;
    }
    for (int l = k - 2; l >= 1; --l) redi(k, l);
    ++k;
  }

  result.reduced = BigMatrix(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) result.reduced(i, j) = b[i][j];
  if (track_transform) {
    result.transform = BigMatrix(rows, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < rows; ++j) result.transform(i, j) = h[i][j];
  }
  return result;
}

SignSequence symmetric_completion(const Eigen::VectorXi& half, int n) {
  const int m = (n + 1) / 2;
  if (half.size() != m) throw std::invalid_argument("symmetric_completion: need (n+1)/2 values");
  Eigen::VectorXi v(n);
  v[0] = half[0];
  for (int k = 1; k < m; ++k) v[k] = v[n - k] = half[k];
  return SignSequence(std::move(v));
}

bool is_reflection_symmetric(const SignSequence& s) { return s.reflected() == s; }

namespace {

ReductionReport reduce_and_scan(const LatticeBasis& basis, const Instance& verify_against,
                                const std::optional<SignSequence>& planted) {
  const int n = basis.n;
  const int m = basis.m;
  ReductionReport report;
  report.p_bits = basis.p_bits;
  report.reduced_rows = lll_reduce(basis.rows).reduced;
  const BigMatrix& rows = report.reduced_rows;

  // s_0 enters only the q = 0 equation, which fixes the count of +1 signs;
  // a reduced row may carry it shifted, so only u_1..u_{m-1} are matched and
  // both values of s_0 are tried.
  Eigen::VectorXi half(m);
  for (int i = 0; i < rows.rows() && !report.succeeded; ++i) {
    for (int shift = -2; shift <= 2 && !report.succeeded; ++shift) {
      bool unit = true;
      for (int j = 1; j < m && unit; ++j) {
        const BigInt v = rows(i, m + j) - shift;
        if (v == 1) half[j] = 1;
        else if (v == -1) half[j] = -1;
        else unit = false;
      }
      if (!unit) continue;
      for (int first : {1, -1}) {
        half[0] = first;
        const SignSequence candidate = symmetric_completion(half, n);
        if (verify(candidate, verify_against)) {
          report.succeeded = true;
          report.found_solution = candidate;
          break;
        }
      }
    }
  }

  if (planted) {
    if (planted->size() != n || !is_reflection_symmetric(*planted))
      throw std::invalid_argument("solve_symmetric_lll: planted solution must be reflection symmetric");
    // v_1 = [0 1] G and v_s = [y s] G with y_q the sign of the real
    // transform of the planted sequence.
    Eigen::Matrix<BigInt, 1, Eigen::Dynamic> ones_coeff = Eigen::Matrix<BigInt, 1, Eigen::Dynamic>::Constant(2 * m, BigInt(0));
    Eigen::Matrix<BigInt, 1, Eigen::Dynamic> s_coeff = ones_coeff;
    const ComplexVector spec = dft(planted->as_real());
    for (int q = 0; q < m; ++q) s_coeff[q] = spec[q].real() >= 0 ? 1 : -1;
    for (int k = 0; k < m; ++k) {
      ones_coeff[m + k] = 1;
      s_coeff[m + k] = (*planted)[k];
    }
    const Eigen::Matrix<BigInt, 1, Eigen::Dynamic> v1 = ones_coeff * basis.rows;
    const Eigen::Matrix<BigInt, 1, Eigen::Dynamic> vs = s_coeff * basis.rows;
    int plus = -1, minus = -1;
    for (int k = 0; k < m; ++k) {
      if ((*planted)[k] > 0 && plus < 0) plus = k;
      if ((*planted)[k] < 0 && minus < 0) minus = k;
    }
    bool hit = false;
    for (int i = 0; i < rows.rows() && !hit && plus >= 0 && minus >= 0; ++i) {
      const BigInt diff = rows(i, m + plus) - rows(i, m + minus);
      const BigInt sum = rows(i, m + plus) + rows(i, m + minus);
      if (diff % 2 != 0 || diff == 0) continue;
      const BigInt coef_b = diff / 2;
      const BigInt coef_a = sum / 2;
      bool equal = true;
      for (int c = 0; c < 2 * m && equal; ++c) equal = rows(i, c) == coef_a * v1[c] + coef_b * vs[c];
      hit = equal;
    }
    report.span_criterion = hit;
  }
  return report;
}

}  // namespace

ReductionReport solve_symmetric_lll(const MagnitudeData& magnitudes, const Instance& verify_against, int p_bits,
                                    const std::optional<SignSequence>& planted) {
  if (magnitudes.n != verify_against.n) throw std::invalid_argument("solve_symmetric_lll: size mismatch");
  return reduce_and_scan(build_lattice_basis(magnitudes, p_bits), verify_against, planted);
}

ReductionReport solve_symmetric_lll(const Instance& instance, int p_bits, const std::optional<SignSequence>& planted) {
  instance.validate();
  if (instance.n % 2 == 0) throw std::invalid_argument("solve_symmetric_lll: even n is not supported");
  switch (instance.kind) {
    case InstanceKind::Exact:
      return reduce_and_scan(build_lattice_basis(instance.autocorrelation, p_bits), instance, planted);
    case InstanceKind::Noisy:
      return solve_symmetric_lll(magnitudes_from_autocorrelation(instance.autocorrelation, true), instance, p_bits,
                                 planted);
    case InstanceKind::FixedPrecision:
      return solve_symmetric_lll(MagnitudeData{instance.n, instance.sq_magnitudes}, instance, p_bits, planted);
  }
  return {};
}

std::optional<int> minimal_lattice_bits(const Instance& instance, int max_bits) {
  for (int p = 1; p <= max_bits; ++p)
    if (solve_symmetric_lll(instance, p).succeeded) return p;
  return std::nullopt;
}

}  // namespace bitret
