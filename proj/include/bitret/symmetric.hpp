#pragma once

#include "bitret/core.hpp"
#include "bitret/spectral.hpp"

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <Eigen/Dense>

#include <optional>
#include <utility>

namespace bitret {

using BigInt = boost::multiprecision::mpz_int;
using BigMatrix = Eigen::Matrix<BigInt, Eigen::Dynamic, Eigen::Dynamic>;

// Reconstructs a reflection-symmetric sequence (s_k = s_{-k}) from its exact
// autocorrelation for an odd prime n via the parity of the transformed bit
// autocorrelation: b_k = a'_{2k} mod 2 with a'_k = (a_k + n - 2 sum s) / 4
// and sum s the non-negative root of sum a. Throws std::invalid_argument for
// malformed input or a result that does not verify.
BitSequence solve_symmetric_mod2(const Autocorrelation& a);

// Largest supported precision; constants are evaluated with 400 bits.
inline constexpr int kMaxLatticeBits = 368;

struct LatticeBasis {
  int n = 0;
  int m = 0;  // (n + 1) / 2
  int p_bits = 0;
  BigInt scale;  // 2^p_bits
  // Rows generate the lattice: [round(K D) 0; round(K C) I].
  BigMatrix rows;
};

// sqrt(n)|s^_q| from the integer autocorrelation, evaluated in high
// precision.
LatticeBasis build_lattice_basis(const Autocorrelation& a, int p_bits);
// sqrt(n)|s^_q| = sqrt(n sq_q) from double-precision magnitudes.
LatticeBasis build_lattice_basis(const MagnitudeData& magnitudes, int p_bits);

struct LllResult {
  BigMatrix reduced;
  BigMatrix transform;  // reduced = transform * input
  std::uint64_t swaps = 0;
};

// Integral LLL with exact Gram-Schmidt bookkeeping (determinants d_i and
// scaled coefficients lambda_ij). lovasz_delta = num / den in (1/4, 1].
// Throws std::invalid_argument on linearly dependent rows.
LllResult lll_reduce(const BigMatrix& basis, long delta_num = 3, long delta_den = 4, bool track_transform = false);

struct ReductionReport {
  BigMatrix reduced_rows;
  std::optional<SignSequence> found_solution;
  int p_bits = 0;
  bool succeeded = false;
  // Only set when a planted solution is supplied: some reduced row equals
  // a v_1 + b v_s with b != 0.
  std::optional<bool> span_criterion;
};

// Builds the basis, reduces it and scans each reduced row's last m entries u
// for u_k - c = +-x_k (k >= 1) with x in {-1,1}^m and |c| <= 2; both values
// of x_0 are tried and the symmetric completion of x must verify against
// `instance`. Reduction uses the default Lovasz parameter 3/4.
ReductionReport solve_symmetric_lll(const Instance& instance, int p_bits,
                                    const std::optional<SignSequence>& planted = std::nullopt);
ReductionReport solve_symmetric_lll(const MagnitudeData& magnitudes, const Instance& verify_against, int p_bits,
                                    const std::optional<SignSequence>& planted = std::nullopt);

// Smallest p in [1, max_bits] where the attack succeeds, if any.
std::optional<int> minimal_lattice_bits(const Instance& instance, int max_bits);

// s_k = x_k for k < m and s_{n-k} = x_k.
SignSequence symmetric_completion(const Eigen::VectorXi& half, int n);
bool is_reflection_symmetric(const SignSequence& s);

}  // namespace bitret
