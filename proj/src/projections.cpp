#include "bitret/projections.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bitret {

namespace {
constexpr int kDenseLimit = 256;
}

ConstraintGeometry ConstraintGeometry::from_magnitudes(const MagnitudeData& m, double eta, bool relaxed) {
  ConstraintGeometry g;
  g.n = m.n;
  g.targets = m.sq.cwiseMax(0.0);
  g.eta = eta;
  g.relaxed = relaxed;
  return g;
}

ConstraintGeometry ConstraintGeometry::from_instance(const Instance& instance, bool relaxed) {
  switch (instance.kind) {
    case InstanceKind::Exact:
      return from_magnitudes(magnitudes_from_autocorrelation(instance.autocorrelation, true), 0.0, relaxed);
    case InstanceKind::Noisy:
      return from_magnitudes(magnitudes_from_autocorrelation(instance.autocorrelation, true),
                             2.0 * (instance.n - 1) / instance.n, relaxed);
    case InstanceKind::FixedPrecision:
      return from_magnitudes(MagnitudeData{instance.n, instance.sq_magnitudes}, instance.eta, relaxed);
  }
  return {};
}

ConstraintGeometry ConstraintGeometry::weakened(double radius) const {
  ConstraintGeometry g = *this;
  g.targets = ((targets.array() + eta).sqrt() + radius).square().matrix();
  g.eta = 0;
  g.relaxed = true;
  return g;
}

template <typename Scalar>
ConstraintProjector<Scalar>::ConstraintProjector(const ConstraintGeometry& g)
    : geometry_(g), n_(g.n), half_(g.n / 2 + 1), dense_(g.n <= kDenseLimit) {
  if (n_ < 2 || g.targets.size() != half_) throw std::invalid_argument("ConstraintProjector: bad geometry");
  re_.resize(half_);
  im_.resize(half_);
  bound_.resize(half_);
  root_targets_ = g.targets.cwiseSqrt().template cast<Scalar>();
  for (int q = 0; q < half_; ++q) bound_[q] = static_cast<Scalar>(g.bound(q));
  if (dense_) {
    const Scalar scale = Scalar(1) / std::sqrt(Scalar(n_));
    Mat cos_fwd(half_, n_), sin_fwd(half_, n_);
    for (int q = 0; q < half_; ++q) {
      for (int k = 0; k < n_; ++k) {
        const long r = static_cast<long>(k) * q % n_;
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / n_;
        cos_fwd(q, k) = static_cast<Scalar>(std::cos(angle)) * scale;
        sin_fwd(q, k) = static_cast<Scalar>(std::sin(angle)) * scale;
      }
    }
    Vec weight = Vec::Constant(half_, Scalar(2));
    weight[0] = 1;
    if (n_ % 2 == 0) weight[half_ - 1] = 1;
    fwd_.resize(2 * half_, n_);
    fwd_ << cos_fwd, sin_fwd;
    inv_.resize(n_, 2 * half_);
    inv_ << (weight.asDiagonal() * cos_fwd).transpose(), (weight.asDiagonal() * sin_fwd).transpose();
    spec_.resize(2 * half_);
  } else {
    plan_ = std::make_shared<const FourierPlan<Scalar>>(n_);
    buffer_.resize(n_);
  }
}

template <typename Scalar>
void ConstraintProjector<Scalar>::analyze(const Vec& x) {
  if (x.size() != n_) throw std::invalid_argument("ConstraintProjector: length mismatch");
  if (dense_) {
    spec_.noalias() = fwd_ * x;
    re_ = spec_.head(half_);
    im_ = spec_.tail(half_);
    return;
  }
  for (int k = 0; k < n_; ++k) buffer_[k] = x[k];
  buffer_ = plan_->forward(buffer_);
  for (int q = 0; q < half_; ++q) {
    re_[q] = buffer_[q].real();
    im_[q] = buffer_[q].imag();
  }
  im_[0] = 0;
  if (n_ % 2 == 0) im_[half_ - 1] = 0;
}

template <typename Scalar>
void ConstraintProjector<Scalar>::synthesize(Vec& out) {
  out.resize(n_);
  if (dense_) {
    spec_ << re_, im_;
    out.noalias() = inv_ * spec_;
    return;
  }
  for (int q = 0; q < half_; ++q) buffer_[q] = {re_[q], im_[q]};
  for (int q = half_; q < n_; ++q) buffer_[q] = std::conj(buffer_[n_ - q]);
  buffer_ = plan_->inverse(buffer_);
  for (int k = 0; k < n_; ++k) out[k] = buffer_[k].real();
}

template <typename Scalar>
void ConstraintProjector<Scalar>::project(const Vec& x, Vec& out) {
  analyze(x);
  for (int q = 0; q < half_; ++q) {
    const Scalar sq = re_[q] * re_[q] + im_[q] * im_[q];
    if (sq > 0) {
      const Scalar s = root_targets_[q] / std::sqrt(sq);
      re_[q] *= s;
      im_[q] *= s;
    } else {
      re_[q] = root_targets_[q];
      im_[q] = 0;
    }
  }
  synthesize(out);
}

template <typename Scalar>
void ConstraintProjector<Scalar>::project_relaxed(const Vec& x, Vec& out) {
  analyze(x);
  bool changed = false;
  for (int q = 0; q < half_; ++q) {
    const Scalar sq = re_[q] * re_[q] + im_[q] * im_[q];
    if (sq > bound_[q]) {
      const Scalar s = std::sqrt(bound_[q] / sq);
      re_[q] *= s;
      im_[q] *= s;
      changed = true;
    }
  }
  if (!changed) {
    out = x;
    return;
  }
  synthesize(out);
}

template <typename Scalar>
typename ConstraintProjector<Scalar>::Vec ConstraintProjector<Scalar>::sq_magnitudes(const Vec& x) {
  analyze(x);
  return (re_.array().square() + im_.array().square()).matrix();
}

template class ConstraintProjector<double>;
template class ConstraintProjector<float>;

SignSequence project_B(const RealVector& x) {
  Eigen::VectorXi v(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) v[k] = x[k] >= 0 ? 1 : -1;
  return SignSequence(std::move(v));
}

RealVector project_B_real(const RealVector& x) {
  return x.unaryExpr([](double v) { return v >= 0 ? 1.0 : -1.0; });
}

RealVector project_A(const RealVector& x, const ConstraintGeometry& g) {
  ConstraintProjector<double> p(g);
  RealVector out;
  p.project(x, out);
  return out;
}

RealVector project_A_relaxed(const RealVector& x, const ConstraintGeometry& g) {
  ConstraintGeometry relaxed = g;
  relaxed.relaxed = true;
  ConstraintProjector<double> p(relaxed);
  RealVector out;
  p.project_relaxed(x, out);
  return out;
}

RealVector project_facet(const RealVector& x, const Facet& f) {
  if (x.size() != f.n || f.depth() > f.n) throw std::invalid_argument("project_facet: length mismatch");
  const double t = f.thickness;
  RealVector out = x.cwiseMax(-1.0 - t).cwiseMin(1.0 + t);
  for (int k = 0; k < f.depth(); ++k) {
    const double s = f.fixed[k];
    out[k] = std::clamp(x[k], s - f.thickness, s + f.thickness);
  }
  return out;
}

SeparationOracle::SeparationOracle(const ConstraintGeometry& g, const Facet& f, double tol)
    : projector_([&] {
        ConstraintGeometry relaxed = g;
        relaxed.relaxed = true;
        return relaxed;
      }()),
      facet_(f),
      tol_(tol) {
  if (f.n != g.n) throw std::invalid_argument("SeparationOracle: facet and geometry sizes differ");
}

OracleResult SeparationOracle::query(const RealVector& x) {
  OracleResult r;
  projector_.project_relaxed(x, pa_);
  pf_ = project_facet(x, facet_);
  r.dist_relaxed = (x - pa_).norm();
  r.dist_facet = (x - pf_).norm();
  if (r.dist_relaxed <= tol_ && r.dist_facet <= tol_) {
    r.in_both = true;
    return r;
  }
  const RealVector& p = r.dist_relaxed >= r.dist_facet ? pa_ : pf_;
  const double d = std::max(r.dist_relaxed, r.dist_facet);
  r.plane.normal = (x - p) / d;
  r.plane.offset = r.plane.normal.dot(p);
  return r;
}

bool SeparationOracle::contains(const RealVector& x) { return query(x).in_both; }

OracleResult separation_oracle(const RealVector& x, const ConstraintGeometry& g, const Facet& f, double tol) {
  return SeparationOracle(g, f, tol).query(x);
}

}  // namespace bitret
