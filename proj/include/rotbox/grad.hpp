// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>

#include "rotbox/dual.hpp"
#include "rotbox/geom.hpp"

namespace rotbox {

// Finite-difference cross-check of a forward-mode gradient over the five
// prediction parameters (cx, cy, w, h, theta).
struct GradReport {
  std::array<double, 5> analytic{};
  std::array<double, 5> numeric{};
  double max_rel_err = 0.0;
};

namespace detail {

template <class S>
RotatedBox<S> lift_box(const RotatedBox<double>& b, int active) {
  if constexpr (is_dual_v<S>) {
    return RotatedBox<S>{Dual(b.cx, active == 0), Dual(b.cy, active == 1), Dual(b.w, active == 2),
                         Dual(b.h, active == 3), Dual(b.theta, active == 4)};
  } else {
    (void)active;
    return b;
  }
}

}  // namespace detail

// Forward-mode gradient of loss(gt, prd) in the prd parameters: one dual
// pass per coordinate, gt held constant. loss must be callable on both
// RotatedBox<double> and RotatedBox<Dual>. Throws NonSmoothPoint when the
// evaluation crosses a detected tie or coincidence.
template <class F>
std::array<double, 5> grad_prd(F&& loss, const RotatedBox<double>& gt,
                               const RotatedBox<double>& prd) {
  std::array<double, 5> g{};
  RotatedBox<Dual> gtd = detail::lift_box<Dual>(gt, -1);
  for (int i = 0; i < 5; ++i) {
    Dual out = loss(gtd, detail::lift_box<Dual>(prd, i));
    g[i] = out.eps;
  }
  return g;
}

// Central finite differences against the forward-mode gradient. The step
// for coordinate i is h * max(1, |p_i|). max_rel_err uses denominator
// max(|analytic|, |numeric|, 1e-8).
template <class F>
GradReport check_grad(F&& loss, const RotatedBox<double>& gt, const RotatedBox<double>& prd,
                      double h = 1e-5) {
  GradReport rep;
  rep.analytic = grad_prd(loss, gt, prd);
  std::array<double, 5> p{prd.cx, prd.cy, prd.w, prd.h, prd.theta};
  for (int i = 0; i < 5; ++i) {
    double hi = h * std::max(1.0, std::abs(p[i]));
    auto at = [&](double delta) {
      std::array<double, 5> q = p;
      q[i] += delta;
      return loss(gt, RotatedBox<double>{q[0], q[1], q[2], q[3], q[4]});
    };
    rep.numeric[i] = (at(hi) - at(-hi)) / (2.0 * hi);
    double denom = std::max({std::abs(rep.analytic[i]), std::abs(rep.numeric[i]), 1e-8});
    rep.max_rel_err = std::max(rep.max_rel_err, std::abs(rep.analytic[i] - rep.numeric[i]) / denom);
  }
  return rep;
}

}  // namespace rotbox
