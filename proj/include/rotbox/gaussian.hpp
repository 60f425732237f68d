// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "rotbox/geom.hpp"

namespace rotbox {

// Relative eigenvalue conditioning floor for covariance inversions. Valid
// boxes cannot trip it; it guards dual-number underflow and misuse.
inline constexpr double kEpsCond = 1e-12;

struct SingularCovariance : std::runtime_error {
  explicit SingularCovariance(const char* what) : std::runtime_error(what) {}
};

// Mean and symmetric positive-definite covariance [[sxx, sxy], [sxy, syy]].
template <class S = double>
struct Gaussian2 {
  Vec2<S> mu;
  S sxx{}, sxy{}, syy{};
};

enum class GwdTransform { Identity, Sqrt, Log1p };

// Bounded-similarity config: gwd = 1 / (tau + f(d^2)) with tau >= 1.
struct GwdConfig {
  double tau = 1.0;
  GwdTransform f = GwdTransform::Sqrt;
};

namespace detail {

template <class S>
void require_conditioned(const Gaussian2<S>& g, const char* site) {
  double a = value_of(g.sxx), b = value_of(g.sxy), c = value_of(g.syy);
  double tr = a + c;
  double disc = std::sqrt((a - c) * (a - c) + 4.0 * b * b);
  double lo = 0.5 * (tr - disc), hi = 0.5 * (tr + disc);
  if (!(hi > 0.0) || !(lo > kEpsCond * hi)) throw SingularCovariance(site);
}

// Principal square root of an SPD 2x2 via its characteristic polynomial:
// sqrt(M) = (M + sqrt(det) I) / sqrt(tr + 2 sqrt(det)). Exact for SPD input,
// smooth in the entries, no eigenvector branch.
template <class S>
Gaussian2<S> sqrt_spd(const Gaussian2<S>& g) {
  S s = sqrt(g.sxx * g.syy - g.sxy * g.sxy);
  S t = sqrt(g.sxx + g.syy + S(2) * s);
  Gaussian2<S> r;
  r.mu = g.mu;
  r.sxx = (g.sxx + s) / t;
  r.sxy = g.sxy / t;
  r.syy = (g.syy + s) / t;
  return r;
}

}  // namespace detail

// N(center, R diag(w^2/4, h^2/4) R^T): the Gaussian whose principal axes are
// the box half-sides. This is the unique scale for which gaussian_volume
// recovers the rectangle area w * h.
template <class S>
Gaussian2<S> box_to_gaussian(const RotatedBox<S>& b) {
  S c = cos(b.theta), s = sin(b.theta);
  S la = S(0.25) * b.w * b.w, lb = S(0.25) * b.h * b.h;
  Gaussian2<S> g;
  g.mu = {b.cx, b.cy};
  g.sxx = la * c * c + lb * s * s;
  g.sxy = (la - lb) * s * c;
  g.syy = la * s * s + lb * c * c;
  return g;
}

// 2^n |Sigma|^(1/2) with n = 2.
template <class S>
S gaussian_volume(const Gaussian2<S>& g) {
  return S(4) * sqrt(g.sxx * g.syy - g.sxy * g.sxy);
}

// Bounded Wasserstein similarity 1 / (tau + f(d^2)), where d^2 is the
// squared 2-Wasserstein distance between the box Gaussians: squared mean
// distance plus the Frobenius gap of the covariance roots. Symmetric;
// equals 1/tau at coincidence; range (0, 1/tau].
template <class S>
S gwd(const RotatedBox<S>& gt, const RotatedBox<S>& prd, const GwdConfig& cfg = {}) {
  if (!(cfg.tau >= 1.0) || !std::isfinite(cfg.tau))
    throw std::invalid_argument("gwd requires finite tau >= 1");
  Gaussian2<S> a = box_to_gaussian(gt), b = box_to_gaussian(prd);
  detail::require_conditioned(a, "gwd: first covariance near singular");
  detail::require_conditioned(b, "gwd: second covariance near singular");
  Gaussian2<S> ra = detail::sqrt_spd(a), rb = detail::sqrt_spd(b);
  S dxx = ra.sxx - rb.sxx, dxy = ra.sxy - rb.sxy, dyy = ra.syy - rb.syy;
  S d2 = squared_norm(a.mu - b.mu) + dxx * dxx + S(2) * dxy * dxy + dyy * dyy;
#ifndef NDEBUG
  // Equal-angle regime: the matrix form must collapse to the parameter-space
  // distance (cx, cy, w/2, h/2).
  if (value_of(gt.theta) == value_of(prd.theta)) {
    double dc = (value_of(gt.cx) - value_of(prd.cx)) * (value_of(gt.cx) - value_of(prd.cx)) +
                (value_of(gt.cy) - value_of(prd.cy)) * (value_of(gt.cy) - value_of(prd.cy));
    double dwh = 0.25 * (value_of(gt.w) - value_of(prd.w)) * (value_of(gt.w) - value_of(prd.w)) +
                 0.25 * (value_of(gt.h) - value_of(prd.h)) * (value_of(gt.h) - value_of(prd.h));
    double closed = dc + dwh;
    assert(std::abs(value_of(d2) - closed) <= 1e-9 * (1.0 + std::abs(closed)));
  }
#endif
  S f = d2;
  if (cfg.f == GwdTransform::Sqrt) f = sqrt(d2);
  else if (cfg.f == GwdTransform::Log1p) f = log1p(d2);
  return S(1) / (S(cfg.tau) + f);
}

// KL divergence KL(N_p || N_t) of the box Gaussians; >= 0, zero iff they
// coincide, asymmetric in (p, t).
template <class S>
S kld(const RotatedBox<S>& p, const RotatedBox<S>& t) {
  Gaussian2<S> gp = box_to_gaussian(p), gv = box_to_gaussian(t);
  detail::require_conditioned(gp, "kld: first covariance near singular");
  detail::require_conditioned(gv, "kld: second covariance near singular");
  S detp = gp.sxx * gp.syy - gp.sxy * gp.sxy;
  S dett = gv.sxx * gv.syy - gv.sxy * gv.sxy;
  Vec2<S> d = gp.mu - gv.mu;
  // inv(Sigma_t) = [[tyy, -txy], [-txy, txx]] / det
  S maha = (gv.syy * d.x * d.x - S(2) * gv.sxy * d.x * d.y + gv.sxx * d.y * d.y) / dett;
  // Trace term as two symmetric halves: at coincidence each half evaluates
  // bitwise to dett, so tr is exactly 2 and the divergence exactly zero.
  S tr = ((gv.syy * gp.sxx - gv.sxy * gp.sxy) + (gv.sxx * gp.syy - gv.sxy * gp.sxy)) / dett;
  return S(0.5) * (maha + tr + log(dett / detp)) - S(1);
}

// Kalman-fusion overlap: with K = S1 (S1 + S2)^-1 and Sf = S1 - K S1, the
// ratio v(Sf) / (v(S1) + v(S2) - v(Sf)). Centers do not enter. Symmetric;
// range (0, 1/3]; equals 1/3 iff the covariances coincide.
template <class S>
S kfiou(const RotatedBox<S>& gt, const RotatedBox<S>& prd) {
  Gaussian2<S> a = box_to_gaussian(gt), b = box_to_gaussian(prd);
  detail::require_conditioned(a, "kfiou: first covariance near singular");
  detail::require_conditioned(b, "kfiou: second covariance near singular");
  Gaussian2<S> sum;
  sum.sxx = a.sxx + b.sxx;
  sum.sxy = a.sxy + b.sxy;
  sum.syy = a.syy + b.syy;
  detail::require_conditioned(sum, "kfiou: covariance sum near singular");
  S det = sum.sxx * sum.syy - sum.sxy * sum.sxy;
  S i00 = sum.syy / det, i01 = -sum.sxy / det, i11 = sum.sxx / det;
  // m = a (a + b)^-1 a, assembled symmetric.
  S t00 = a.sxx * i00 + a.sxy * i01;
  S t01 = a.sxx * i01 + a.sxy * i11;
  S t10 = a.sxy * i00 + a.syy * i01;
  S t11 = a.sxy * i01 + a.syy * i11;
  S m00 = t00 * a.sxx + t01 * a.sxy;
  S m01 = t00 * a.sxy + t01 * a.syy;
  S m10 = t10 * a.sxx + t11 * a.sxy;
  S m11 = t10 * a.sxy + t11 * a.syy;
  Gaussian2<S> fused;
  fused.mu = a.mu;
  fused.sxx = a.sxx - m00;
  fused.sxy = a.sxy - S(0.5) * (m01 + m10);
  fused.syy = a.syy - m11;
  S v1 = gaussian_volume(a), v2 = gaussian_volume(b), v3 = gaussian_volume(fused);
  return v3 / (v1 + v2 - v3);
}

// kfiou rescaled so coinciding covariances score 1 instead of 1/3.
template <class S>
S kfiou_normalized(const RotatedBox<S>& gt, const RotatedBox<S>& prd) {
  return S(3) * kfiou(gt, prd);
}

// Euclidean distance between box centers.
template <class S>
S center_loss(const RotatedBox<S>& gt, const RotatedBox<S>& prd) {
  Vec2<S> d{gt.cx - prd.cx, gt.cy - prd.cy};
  return sqrt(squared_norm(d));
}

}  // namespace rotbox
