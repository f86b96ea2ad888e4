#pragma once

#include <stdexcept>

namespace bitret {

template <typename Scalar>
FourierPlan<Scalar>::FourierPlan(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("FourierPlan: length must be positive");
  int rest = n;
  auto take = [&](int p) {
    while (rest % p == 0) {
      rest /= p;
      factors_.push_back(p);
      factors_.push_back(rest);
    }
  };
  take(4);
  take(2);
  for (int p = 3; p <= kMaxRadix; p += 2) take(p);
  if (n == 1) {
    factors_ = {1, 1};
  }
  smooth_ = (rest == 1);

  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  if (smooth_) {
    tw_pos_.resize(static_cast<std::size_t>(n));
    tw_neg_.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      Scalar angle = two_pi * Scalar(k) / Scalar(n);
      tw_pos_[k] = Complex(std::cos(angle), std::sin(angle));
      tw_neg_[k] = std::conj(tw_pos_[k]);
    }
    return;
  }

  m_ = 1;
  while (m_ < 2 * n - 1) m_ *= 2;
  inner_ = std::make_shared<const FourierPlan>(m_);
  chirp_.resize(static_cast<std::size_t>(n));
  const std::int64_t two_n = 2 * static_cast<std::int64_t>(n);
  for (std::int64_t j = 0; j < n; ++j) {
    std::int64_t r = (j * j) % two_n;
    Scalar angle = std::numbers::pi_v<Scalar> * Scalar(r) / Scalar(n);
    chirp_[j] = Complex(std::cos(angle), std::sin(angle));
  }
  auto kernel = [&](bool positive) {
    std::vector<Complex> v(static_cast<std::size_t>(m_), Complex(0));
    for (int j = 0; j < n; ++j) {
      Complex c = positive ? std::conj(chirp_[j]) : chirp_[j];
      v[j] = c;
      if (j > 0) v[m_ - j] = c;
    }
    std::vector<Complex> hat(static_cast<std::size_t>(m_));
    inner_->raw(v.data(), hat.data(), true);
    return hat;
  };
  kernel_hat_pos_ = kernel(true);
  kernel_hat_neg_ = kernel(false);
}

template <typename Scalar>
typename FourierPlan<Scalar>::ComplexVec FourierPlan<Scalar>::transform(const ComplexVec& x,
                                                                         Direction dir) const {
  if (x.size() != n_) throw std::invalid_argument("FourierPlan: input length mismatch");
  ComplexVec out(n_);
  raw(x.data(), out.data(), dir == Direction::Forward);
  out /= std::sqrt(Scalar(n_));
  return out;
}

template <typename Scalar>
void FourierPlan<Scalar>::raw(const Complex* in, Complex* out, bool positive) const {
  if (!smooth_) {
    bluestein(in, out, positive);
    return;
  }
  if (n_ == 1) {
    out[0] = in[0];
    return;
  }
  std::vector<Complex> scratch(kMaxRadix + 1);
  radix_work(out, in, 1, factors_.data(), positive ? tw_pos_ : tw_neg_, scratch.data());
}

template <typename Scalar>
void FourierPlan<Scalar>::radix_work(Complex* out, const Complex* in, std::size_t fstride,
                                     const int* factors, const std::vector<Complex>& tw,
                                     Complex* scratch) const {
  const int p = factors[0];
  const int m = factors[1];
  if (m == 1) {
    for (int j = 0; j < p; ++j) out[j] = in[j * fstride];
  } else {
    for (int j = 0; j < p; ++j) radix_work(out + j * m, in + j * fstride, fstride * p, factors + 2, tw, scratch);
  }
  const std::size_t n = static_cast<std::size_t>(n_);
  if (p == 2) {
    for (int u = 0; u < m; ++u) {
      Complex t = out[u + m] * tw[u * fstride];
      out[u + m] = out[u] - t;
      out[u] += t;
    }
    return;
  }
  for (int u = 0; u < m; ++u) {
    for (int q1 = 0; q1 < p; ++q1) scratch[q1] = out[u + q1 * m];
    for (int q1 = 0; q1 < p; ++q1) {
      const std::size_t k = static_cast<std::size_t>(u + q1 * m);
      const std::size_t step = fstride * k % n;
      std::size_t idx = 0;
      Complex acc = scratch[0];
      for (int q = 1; q < p; ++q) {
        idx += step;
        if (idx >= n) idx -= n;
        acc += scratch[q] * tw[idx];
      }
      out[k] = acc;
    }
  }
}

template <typename Scalar>
void FourierPlan<Scalar>::bluestein(const Complex* in, Complex* out, bool positive) const {
  // kq = (k^2 + q^2 - (q-k)^2) / 2 turns the transform into a convolution
  // with a chirp.
  std::vector<Complex> u(static_cast<std::size_t>(m_), Complex(0));
  for (int k = 0; k < n_; ++k) u[k] = in[k] * (positive ? chirp_[k] : std::conj(chirp_[k]));
  std::vector<Complex> uh(static_cast<std::size_t>(m_));
  inner_->raw(u.data(), uh.data(), true);
  const auto& kh = positive ? kernel_hat_pos_ : kernel_hat_neg_;
  for (int j = 0; j < m_; ++j) uh[j] *= kh[j];
  inner_->raw(uh.data(), u.data(), false);
  const Scalar scale = Scalar(1) / Scalar(m_);
  for (int q = 0; q < n_; ++q) out[q] = u[q] * scale * (positive ? chirp_[q] : std::conj(chirp_[q]));
}

}  // namespace bitret
