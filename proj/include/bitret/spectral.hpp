#pragma once

#include "bitret/core.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <vector>

namespace bitret {

enum class Direction { Forward, Inverse };

// Unitary DFT of arbitrary length with the positive-exponent forward
// convention x^_q = n^{-1/2} sum_k exp(+2 pi i k q / n) x_k.
// Smooth lengths (prime factors <= 31) use mixed-radix Cooley-Tukey; other
// lengths use Bluestein's chirp-z over a power-of-two transform. The plan is
// immutable after construction and can be shared between threads.
template <typename Scalar>
class FourierPlan {
 public:
  using Complex = std::complex<Scalar>;
  using ComplexVec = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

  explicit FourierPlan(int n);

  int size() const { return n_; }
  ComplexVec transform(const ComplexVec& x, Direction dir) const;
  ComplexVec forward(const ComplexVec& x) const { return transform(x, Direction::Forward); }
  ComplexVec inverse(const ComplexVec& x) const { return transform(x, Direction::Inverse); }

 private:
  static constexpr int kMaxRadix = 31;

  // Unnormalized sum_k x_k w^{+-kq}, w = exp(2 pi i / n).
  void raw(const Complex* in, Complex* out, bool positive) const;
  void radix_work(Complex* out, const Complex* in, std::size_t fstride, const int* factors,
                  const std::vector<Complex>& tw, Complex* scratch) const;
  void bluestein(const Complex* in, Complex* out, bool positive) const;

  int n_;
  bool smooth_ = true;
  std::vector<int> factors_;      // (radix, remaining) pairs
  std::vector<Complex> tw_pos_;   // exp(+2 pi i k / n)
  std::vector<Complex> tw_neg_;
  // Bluestein state.
  int m_ = 0;
  std::vector<Complex> chirp_;            // exp(+i pi k^2 / n)
  std::vector<Complex> kernel_hat_pos_;   // transform of the conjugate chirp
  std::vector<Complex> kernel_hat_neg_;
  std::shared_ptr<const FourierPlan> inner_;
};

using ComplexVector = Eigen::VectorXcd;

ComplexVector dft(const ComplexVector& x, Direction dir = Direction::Forward);
ComplexVector dft(const RealVector& x, Direction dir = Direction::Forward);

// Squared Fourier magnitudes |s^_q|^2 for q = 0..n/2.
struct MagnitudeData {
  int n = 0;
  RealVector sq;
};

// |s^_q|^2 = a^_q / sqrt(n) from a symmetric autocorrelation. Throws
// std::domain_error when a computed value is below -1e-9 and negatives are
// not allowed (an exact autocorrelation that no sequence can produce).
MagnitudeData magnitudes_from_autocorrelation(const IntVector& a, bool allow_negative = false);
MagnitudeData magnitudes_of(const SignSequence& s);
MagnitudeData magnitudes_of(const RealVector& x);

// Uniform zero band used for noisy data: 2(n-1)/n^{3/2} times slack.
double noisy_zero_threshold(int n, double slack = 1.0);

struct HardnessReport {
  double h = 0;
  MagnitudeData magnitudes;
  std::vector<int> excluded_q;
};

// Geometric mean of |s^_q|^2 over q != -q (mod n). A magnitude at or below
// zero_threshold forces h = 0.
HardnessReport hardness_index(const MagnitudeData& data, double zero_threshold = 0.0);
HardnessReport hardness_index(const SignSequence& s);
// Noisy instances use noisy_zero_threshold(n, slack); fixed-precision
// instances use eta.
HardnessReport hardness_index(const Instance& instance, double slack = 1.0);

struct HardnessStatistics {
  double mean_log_h = 0;
  double variance_log_h = 0;
  int samples = 0;
  int zero_count = 0;
};

// log h over sequences whose signs are -1 independently with probability delta.
HardnessStatistics hardness_statistics(int n, double delta, int samples, std::uint64_t seed);

inline constexpr double kEulerGamma = 0.57721566490153286061;

}  // namespace bitret

#include "bitret/detail/fourier_plan.ipp"
