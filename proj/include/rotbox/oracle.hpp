// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "rotbox/geom.hpp"
#include "rotbox/parallel.hpp"
#include "rotbox/piou.hpp"
#include "rotbox/rng.hpp"

namespace rotbox {

struct McEstimate {
  double mean = 0.0;
  double std_err = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

// Containment by rotating the point into the box frame; deliberately not
// shared with the clipping path or with hard_inside, so the oracle stays an
// independent route to the same quantity.
inline bool oracle_inside(double px, double py, const RotatedBox<double>& b) {
  double dx = px - b.cx, dy = py - b.cy;
  double c = std::cos(b.theta), s = std::sin(b.theta);
  double fx = c * dx + s * dy;
  double fy = c * dy - s * dx;
  return std::abs(fx) <= 0.5 * b.w && std::abs(fy) <= 0.5 * b.h;
}

struct Aabb {
  double x0, y0, x1, y1;
  double area() const { return (x1 - x0) * (y1 - y0); }
};

inline Aabb joint_aabb(const RotatedBox<double>& a, const RotatedBox<double>& b) {
  Aabb r{1e300, 1e300, -1e300, -1e300};
  for (const RotatedBox<double>* box : {&a, &b}) {
    auto ring = corner_ring(*box);
    for (const auto& p : ring) {
      r.x0 = std::min(r.x0, p.x);
      r.y0 = std::min(r.y0, p.y);
      r.x1 = std::max(r.x1, p.x);
      r.y1 = std::max(r.y1, p.y);
    }
  }
  return r;
}

// Samples are drawn in fixed-size chunks, each from its own derived
// substream, and only integer hit counts cross chunk boundaries. The total
// is therefore independent of how chunks are distributed over workers.
inline constexpr std::uint64_t kMcChunk = 1ull << 14;

template <bool Parallel>
McEstimate mc_impl(const RotatedBox<double>& a, const RotatedBox<double>& b, std::uint64_t n,
                   std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("mc_intersection_area requires n >= 2");
  Aabb box = joint_aabb(a, b);
  const double w = box.x1 - box.x0, h = box.y1 - box.y0;
  const long n_chunks = static_cast<long>((n + kMcChunk - 1) / kMcChunk);
  std::uint64_t hits = 0;
#ifdef _OPENMP
#pragma omp parallel for num_threads(worker_count()) schedule(static) reduction(+ : hits) \
    if (Parallel)
#endif
  for (long c = 0; c < n_chunks; ++c) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
    std::uint64_t lo = static_cast<std::uint64_t>(c) * kMcChunk;
    std::uint64_t count = std::min(kMcChunk, n - lo);
    std::uint64_t local = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
      double px = box.x0 + w * rng.uniform();
      double py = box.y0 + h * rng.uniform();
      if (oracle_inside(px, py, a) && oracle_inside(px, py, b)) ++local;
    }
    hits += local;
  }
  const double area = box.area();
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  McEstimate e;
  e.mean = area * p;
  // Bernoulli sample variance: s^2 = area^2 p(1-p) n/(n-1); std_err = s/sqrt(n).
  e.std_err = area * std::sqrt(p * (1.0 - p) / (nn - 1.0));
  e.n_samples = n;
  e.seed = seed;
  return e;
}

}  // namespace detail

// Unbiased uniform-sampling estimate of the intersection area over the
// joint AABB. Deterministic for a fixed seed, bitwise independent of the
// worker count. Disjoint boxes give exactly zero.
inline McEstimate mc_intersection_area(const RotatedBox<double>& a, const RotatedBox<double>& b,
                                       std::uint64_t n, std::uint64_t seed) {
  return detail::mc_impl<true>(a, b, n, seed);
}

inline McEstimate mc_intersection_area_serial(const RotatedBox<double>& a,
                                              const RotatedBox<double>& b, std::uint64_t n,
                                              std::uint64_t seed) {
  return detail::mc_impl<false>(a, b, n, seed);
}

namespace detail {

template <bool Parallel>
double dense_pixel_impl(const RotatedBox<double>& a, const RotatedBox<double>& b, double step) {
  if (!(step > 0.0) || !std::isfinite(step))
    throw std::invalid_argument("dense_pixel_iou requires step > 0");
  Aabb box = joint_aabb(a, b);
  const long nx = static_cast<long>(std::floor((box.x1 - box.x0) / step)) + 1;
  const long ny = static_cast<long>(std::floor((box.y1 - box.y0) / step)) + 1;
  std::uint64_t both = 0, either = 0;
#ifdef _OPENMP
#pragma omp parallel for num_threads(worker_count()) schedule(static) \
    reduction(+ : both, either) if (Parallel)
#endif
  for (long j = 0; j < ny; ++j) {
    double py = box.y0 + static_cast<double>(j) * step;
    std::uint64_t lb = 0, le = 0;
    for (long i = 0; i < nx; ++i) {
      double px = box.x0 + static_cast<double>(i) * step;
      bool ia = hard_inside({px, py}, a);
      bool ib = hard_inside({px, py}, b);
      lb += ia && ib;
      le += ia || ib;
    }
    both += lb;
    either += le;
  }
  if (either == 0) return 0.0;
  return static_cast<double>(both) / static_cast<double>(either);
}

}  // namespace detail

// Hard-indicator IoU on a lattice of the given pitch; converges to the
// exact clipping IoU as step -> 0.
inline double dense_pixel_iou(const RotatedBox<double>& a, const RotatedBox<double>& b,
                              double step) {
  return detail::dense_pixel_impl<true>(a, b, step);
}

inline double dense_pixel_iou_serial(const RotatedBox<double>& a, const RotatedBox<double>& b,
                                     double step) {
  return detail::dense_pixel_impl<false>(a, b, step);
}

}  // namespace rotbox
