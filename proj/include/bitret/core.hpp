#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bitret {

using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using RealVector = Eigen::VectorXd;

// Periodic autocorrelation values a_0..a_{n-1}; a_k = a_{n-k} is stored
// explicitly.
using Autocorrelation = IntVector;
// Noise quanta: e_0 = 0, e_k = e_{n-k} in {-2, +2}.
using NoisePattern = IntVector;

class BitSequence;

// Length-n sequence of +-1 values, n >= 2.
class SignSequence {
 public:
  SignSequence() = default;
  explicit SignSequence(Eigen::VectorXi values);
  SignSequence(std::initializer_list<int> values);

  static SignSequence ones(int n);
  static SignSequence from_bits(const BitSequence& b);
  // Parses "+-+" or "1,-1,1" forms.
  static SignSequence parse(const std::string& text);

  int size() const { return static_cast<int>(values_.size()); }
  int operator[](int k) const { return values_[k]; }
  const Eigen::VectorXi& values() const { return values_; }
  RealVector as_real() const { return values_.cast<double>(); }
  int sum() const { return values_.sum(); }

  SignSequence flipped(int j) const;
  // Result r satisfies r_k = s_{k-shift}.
  SignSequence shifted(int shift) const;
  // Result r satisfies r_k = s_{-k}.
  SignSequence reflected() const;
  SignSequence negated() const;

  std::string to_string() const;

  friend bool operator==(const SignSequence& a, const SignSequence& b) {
    return a.values_.size() == b.values_.size() && a.values_ == b.values_;
  }
  // Lexicographic, with -1 before +1.
  friend std::strong_ordering operator<=>(const SignSequence& a, const SignSequence& b);

 private:
  Eigen::VectorXi values_;
};

// Length-n 0/1 sequence, paired with signs by b_k = (1 - s_k) / 2.
class BitSequence {
 public:
  BitSequence() = default;
  explicit BitSequence(Eigen::VectorXi values);
  static BitSequence from_signs(const SignSequence& s);
  static BitSequence from_support(int n, const std::vector<int>& support);

  int size() const { return static_cast<int>(values_.size()); }
  int operator[](int k) const { return values_[k]; }
  const Eigen::VectorXi& values() const { return values_; }
  int weight() const { return values_.sum(); }
  std::vector<int> support() const;

 private:
  Eigen::VectorXi values_;
};

enum class InstanceKind { Exact, Noisy, FixedPrecision };

std::string to_string(InstanceKind kind);
InstanceKind parse_instance_kind(const std::string& text);

struct InstanceMeta {
  std::string generator;
  std::uint64_t seed = 0;
  std::optional<double> hardness;
  std::optional<double> delta;
  std::optional<double> mu;
  std::string rng_id;
  // Raw targets skip the realizability checks (congruence, square sum); used
  // for the constant-autocorrelation Hadamard targets.
  bool raw = false;
};

struct Instance {
  InstanceKind kind = InstanceKind::Exact;
  int n = 0;
  // Exact: a. Noisy: a + e.
  IntVector autocorrelation;
  // FixedPrecision: |s^_q|^2 targets for q = 0..n/2.
  RealVector sq_magnitudes;
  double eta = 0.0;
  std::optional<SignSequence> planted;
  InstanceMeta meta;

  // Throws std::invalid_argument naming the violated invariant.
  void validate() const;
};

Instance make_exact(const Autocorrelation& a, bool raw = false);
Instance make_noisy(const IntVector& noisy, bool raw = false);
Instance make_fixed_precision(const RealVector& sq_magnitudes, int n, double eta);

// Invariant checks; each throws std::invalid_argument on violation.
void check_autocorrelation(const Autocorrelation& a, bool raw = false);
void check_noise_pattern(const NoisePattern& e);

Autocorrelation autocorrelate(const SignSequence& s);
IntVector bit_autocorrelate(const BitSequence& b);
Instance apply_noise(const Autocorrelation& a, const NoisePattern& e);

bool verify(const SignSequence& candidate, const Instance& instance);
bool flip_compatible(const SignSequence& s, const NoisePattern& e, int j);

// Lexicographically smallest image under shifts, reflection and negation.
SignSequence canonical_orbit_rep(const SignSequence& s);
// All distinct members of the orbit.
std::vector<SignSequence> orbit(const SignSequence& s);

struct Fraction {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;
  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
};

// Fraction of (s, e) pairs for which flipping sign j stays compatible, by
// full enumeration of 2^n * 2^floor(n/2) cases. Reduced to lowest terms.
Fraction flip_probability_exhaustive(int n, int j = 0);

struct FlipEstimate {
  double probability = 0;
  double std_error = 0;
  std::uint64_t trials = 0;
};
FlipEstimate flip_probability_monte_carlo(int n, std::uint64_t trials, std::uint64_t seed, int j = 0);

// Closed form: (3/4)^((n-1)/2) for odd n, (1/2)(3/4)^(n/2-1) for even n.
double flip_probability_theory(int n);

// Canonical noise vector from its free half e_1..e_{floor(n/2)}.
NoisePattern noise_from_half(int n, const std::vector<int>& half);

}  // namespace bitret
