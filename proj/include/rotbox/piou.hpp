// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rotbox/geom.hpp"
#include "rotbox/parallel.hpp"

namespace rotbox {

struct EmptySupport : std::runtime_error {
  explicit EmptySupport(const char* what) : std::runtime_error(what) {}
};

// Pixel-kernel sampling parameters. A negative pad selects the default of
// two lattice steps; the effective pad is always >= 0.
struct PiouConfig {
  double k = 10.0;        // sigmoid sharpness
  double grid_step = 0.1; // lattice pitch, pixels
  double pad = -1.0;      // lattice margin around the joint AABB, pixels
  // Soft cutoffs at w/2 and h/2, consistent with the hard inside test.
  // When false, cutoffs sit at w and h as in the kernel's printed form.
  bool half_extent_thresholds = true;

  double effective_pad() const { return pad < 0.0 ? 2.0 * grid_step : pad; }
  void validate() const {
    if (!(k > 0.0) || !std::isfinite(k) || !(grid_step > 0.0) || !std::isfinite(grid_step) ||
        !std::isfinite(effective_pad()))
      throw EmptySupport("piou config invalid");
  }
};

namespace detail {

// Box-frame offsets |x'|, |y'| of a fixed pixel. The pixel never carries a
// derivative; the box may.
template <class S>
struct FrameDist {
  S dw, dh;
};

template <class S>
FrameDist<S> frame_dist(double px, double py, const RotatedBox<S>& b) {
  S dx = S(px) - b.cx, dy = S(py) - b.cy;
  S c = cos(b.theta), s = sin(b.theta);
  return {abs(c * dx + s * dy), abs(c * dy - s * dx)};
}

// K(d, s) = 1 - sigmoid(k (d - s)); 0.5 at d = s, -> 1 inside, -> 0 outside.
// Arguments past 700 would overflow exp; both scalar paths return exact 0
// there (the true value is below 1e-300).
template <class S>
S kernel(const S& d, const S& s, double k) {
  S arg = S(k) * (d - s);
  if (value_of(arg) >= 700.0) return S(0);
  return S(1) / (S(1) + exp(arg));
}

template <class S>
S membership(double px, double py, const RotatedBox<S>& b, const PiouConfig& cfg) {
  FrameDist<S> f = frame_dist(px, py, b);
  // Cutoffs follow the box's own sides; differentiate through them.
  S tw = cfg.half_extent_thresholds ? S(0.5) * b.w : b.w;
  S th = cfg.half_extent_thresholds ? S(0.5) * b.h : b.h;
  return kernel(f.dw, tw, cfg.k) * kernel(f.dh, th, cfg.k);
}

}  // namespace detail

// Hard inside-box indicator through the (distance, angle) decomposition:
// d is the pixel-to-center distance, beta the angle between that offset and
// the box axis; the frame offsets are |d cos beta| and |d sin beta|.
inline bool hard_inside(const Vec2<double>& p, const RotatedBox<double>& b) {
  double dx = b.cx - p.x, dy = b.cy - p.y;
  double d = std::sqrt(dx * dx + dy * dy);
  if (d == 0.0) return true;
  double acs = std::acos(std::clamp(dx / d, -1.0, 1.0));
  double psi = dy >= 0.0 ? acs : -acs;
  double beta = psi - b.theta;
  double dw = std::abs(d * std::cos(beta));
  double dh = std::abs(d * std::sin(beta));
  return dw <= 0.5 * b.w && dh <= 0.5 * b.h;
}

// The smooth membership F = K(d_w) * K(d_h) in (0, 1).
template <class S>
S soft_membership(const Vec2<double>& p, const RotatedBox<S>& b, const PiouConfig& cfg) {
  cfg.validate();
  return detail::membership(p.x, p.y, b, cfg);
}

// Regular sampling lattice covering the padded joint AABB of two boxes.
// Placement depends on box values only, never on derivatives, so a Dual
// evaluation integrates over the same fixed point set as a double one.
struct PiouLattice {
  double x0 = 0.0, y0 = 0.0;
  double step = 0.1;
  long nx = 0, ny = 0;
};

template <class S>
PiouLattice make_lattice(const RotatedBox<S>& a, const RotatedBox<S>& b, const PiouConfig& cfg) {
  cfg.validate();
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  for (const RotatedBox<S>* box : {&a, &b}) {
    auto ring = corner_ring(*box);
    for (const auto& p : ring) {
      lo_x = std::min(lo_x, value_of(p.x));
      hi_x = std::max(hi_x, value_of(p.x));
      lo_y = std::min(lo_y, value_of(p.y));
      hi_y = std::max(hi_y, value_of(p.y));
    }
  }
  double pad = cfg.effective_pad();
  PiouLattice lat;
  lat.step = cfg.grid_step;
  lat.x0 = lo_x - pad;
  lat.y0 = lo_y - pad;
  lat.nx = static_cast<long>(std::floor((hi_x + pad - lat.x0) / lat.step)) + 1;
  lat.ny = static_cast<long>(std::floor((hi_y + pad - lat.y0) / lat.step)) + 1;
  if (lat.nx <= 0 || lat.ny <= 0) throw EmptySupport("piou lattice empty");
  return lat;
}

namespace detail {

// Row-major lattice sweep: each row is summed serially, rows are combined
// in index order with compensated addition. The parallel and serial drivers
// share this structure, so their results are bitwise identical and do not
// depend on the worker count.
template <class S, bool Parallel>
S piou_impl(const RotatedBox<S>& a, const RotatedBox<S>& b, const PiouConfig& cfg,
            const PiouLattice& lat) {
  std::vector<S> row_inter(static_cast<size_t>(lat.ny), S(0));
  std::vector<S> row_union(static_cast<size_t>(lat.ny), S(0));
  const long ny = lat.ny, nx = lat.nx;
#ifdef _OPENMP
#pragma omp parallel for num_threads(worker_count()) schedule(static) if (Parallel)
#endif
  for (long j = 0; j < ny; ++j) {
    double py = lat.y0 + static_cast<double>(j) * lat.step;
    CompensatedSum<S> si, su;
    for (long i = 0; i < nx; ++i) {
      double px = lat.x0 + static_cast<double>(i) * lat.step;
      S fa = membership(px, py, a, cfg);
      S fb = membership(px, py, b, cfg);
      S prod = fa * fb;
      si.add(prod);
      su.add(fa + fb - prod);
    }
    row_inter[static_cast<size_t>(j)] = si.get();
    row_union[static_cast<size_t>(j)] = su.get();
  }
  CompensatedSum<S> ti, tu;
  for (long j = 0; j < ny; ++j) {
    ti.add(row_inter[static_cast<size_t>(j)]);
    tu.add(row_union[static_cast<size_t>(j)]);
  }
  double w = lat.step * lat.step;
  S inter = S(w) * ti.get();
  S uni = S(w) * tu.get();
  if (!(value_of(uni) > 0.0)) throw EmptySupport("piou union sum vanished");
  return inter / uni;
}

}  // namespace detail

// PIoU on an explicitly provided lattice; used when differentiating, where
// the lattice must stay frozen at the evaluation point's values.
template <class S>
S piou_on_lattice(const RotatedBox<S>& a, const RotatedBox<S>& b, const PiouConfig& cfg,
                  const PiouLattice& lat) {
  cfg.validate();
  return detail::piou_impl<S, true>(a, b, cfg, lat);
}

// Smooth-membership IoU surrogate over the padded joint AABB; range (0, 1].
// Symmetric exactly (all summands are symmetric products and sums).
template <class S>
S piou(const RotatedBox<S>& a, const RotatedBox<S>& b, const PiouConfig& cfg = {}) {
  return piou_on_lattice(a, b, cfg, make_lattice(a, b, cfg));
}

// Serial reference for the parallel kernel; bitwise-identical results.
template <class S>
S piou_serial(const RotatedBox<S>& a, const RotatedBox<S>& b, const PiouConfig& cfg = {}) {
  cfg.validate();
  PiouLattice lat = make_lattice(a, b, cfg);
  return detail::piou_impl<S, false>(a, b, cfg, lat);
}

}  // namespace rotbox
