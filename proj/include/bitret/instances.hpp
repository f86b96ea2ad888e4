#pragma once

#include "bitret/core.hpp"
#include "bitret/diffset.hpp"

#include <cstdint>
#include <optional>
#include <utility>

namespace bitret {

bool is_prime(std::uint64_t n);
// Legendre symbol (a / p) for an odd prime p; 0 when p divides a.
int legendre_symbol(std::int64_t a, std::int64_t p);

// Entries independently -1 with probability delta.
SignSequence gen_random(int n, double delta, std::uint64_t seed);
// s_0 = 1, s_k = (k / n) for an odd prime n.
SignSequence gen_legendre(int n);

struct AverageCaseResult {
  SignSequence sequence;
  double hardness = 0;
};
// Draws `pool` unbiased sequences, orders them by hardness index and returns
// one uniformly from the central 10% window.
AverageCaseResult gen_average_case(int n, int pool, std::uint64_t seed);

struct SparseResult {
  BitSequence bits;
  DifferenceSetInstance instance;
};
// Uniform K-subset of Z_n containing 0.
SparseResult gen_sparse(int n, int k_ones, std::uint64_t seed);

NoisePattern sample_noise(int n, std::uint64_t seed);
// The noise pattern that moves a symmetric Hadamard autocorrelation
// (a_k in {-3, 1}) to the constant -1: e_k = -1 - a_k.
NoisePattern hadamard_noise(const Autocorrelation& a);
// Raw targets a_0 = n, a_k = -1; realizable only for perfect Hadamard n.
Autocorrelation hadamard_targets(int n);

// Wraps a sequence as a problem instance. Noisy uses sample_noise(noise_seed)
// unless a pattern is given; FixedPrecision requires eta and stores the exact
// magnitudes of s.
Instance make_instance(const SignSequence& s, InstanceKind kind, std::optional<double> eta = std::nullopt,
                       std::uint64_t noise_seed = 0, std::optional<NoisePattern> noise = std::nullopt);

// Expected number of ones for a target mean multiplicity mu:
// the K with K(K-1)/(n-1) closest to mu.
int ones_for_multiplicity(int n, double mu);

}  // namespace bitret
