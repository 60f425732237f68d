// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "rotbox/geom.hpp"
#include "rotbox/iou.hpp"
#include "rotbox/rng.hpp"

namespace rotbox {

// Margin (pixels) that random "smooth" configurations keep from every
// detected non-differentiable set: sort ties, extreme-competitor ties,
// vertices on clip lines, hull collinearity. Finite-difference probes use
// steps around 1e-4 px at these scales, so 1e-3 keeps the combinatorial
// structure fixed across the probe.
inline constexpr double kSmoothMargin = 1e-3;

inline double circumradius(const RotatedBox<double>& b) {
  return 0.5 * std::hypot(b.w, b.h);
}

// Box with center in [lo_c, hi_c]^2, sides from scale/aspect draws, angle
// in (-pi/2, pi/2) away from the boundary.
inline RotatedBox<double> random_box(Rng& rng, double lo_c, double hi_c, double scale_min = 1.5,
                                     double scale_max = 4.0, double aspect_min = 0.4,
                                     double aspect_max = 2.5) {
  double s = rng.uniform(scale_min, scale_max);
  double a = rng.uniform(aspect_min, aspect_max);
  double theta = rng.uniform(-1.55, 1.55);
  return {rng.uniform(lo_c, hi_c), rng.uniform(lo_c, hi_c), s * std::sqrt(a), s / std::sqrt(a),
          theta};
}

namespace detail {

inline std::array<Vec2<double>, 8> corner_union(const RotatedBox<double>& a,
                                                const RotatedBox<double>& b) {
  auto ra = corner_ring(a), rb = corner_ring(b);
  std::array<Vec2<double>, 8> pts;
  for (int i = 0; i < 4; ++i) {
    pts[size_t(i)] = ra[size_t(i)];
    pts[size_t(i + 4)] = rb[size_t(i)];
  }
  return pts;
}

}  // namespace detail

// True when the pair keeps kSmoothMargin from every branch decision the
// metrics take: pairwise coordinate gaps (corner sorting, AABB extremes),
// vertex-to-clip-line distances (polygon clipping), and triple collinearity
// (convex hull), plus a minimum parameter separation.
inline bool smooth_margins_ok(const RotatedBox<double>& a, const RotatedBox<double>& b,
                              double margin = kSmoothMargin) {
  auto pts = detail::corner_union(a, b);
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) {
      if (std::abs(pts[size_t(i)].x - pts[size_t(j)].x) < margin) return false;
      if (std::abs(pts[size_t(i)].y - pts[size_t(j)].y) < margin) return false;
    }
  // Vertex-to-line distances, both directions.
  auto ra = corner_ring(a), rb = corner_ring(b);
  auto check_lines = [&](const std::array<Vec2<double>, 4>& verts,
                         const std::array<Vec2<double>, 4>& poly) {
    for (int e = 0; e < 4; ++e) {
      Vec2<double> p = poly[size_t(e)], q = poly[size_t((e + 1) % 4)];
      Vec2<double> dir = q - p;
      double len = std::hypot(dir.x, dir.y);
      for (const auto& v : verts)
        if (std::abs(cross(dir, v - p)) / len < margin) return false;
    }
    return true;
  };
  if (!check_lines(ra, rb) || !check_lines(rb, ra)) return false;
  // Hull turns: no three of the eight corners near-collinear.
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) {
      Vec2<double> dir = pts[size_t(j)] - pts[size_t(i)];
      double len = std::hypot(dir.x, dir.y);
      if (len < margin) return false;
      for (int k = 0; k < 8; ++k) {
        if (k == i || k == j) continue;
        if (std::abs(cross(dir, pts[size_t(k)] - pts[size_t(i)])) / len < margin) return false;
      }
    }
  // Edge directions well apart: clip intersection points carry 1/sin(dt)
  // factors, so near-parallel edges make finite differences ill-conditioned.
  // Rectangle edges lie at theta and theta + pi/2, so one residue covers all
  // pairings.
  double dt = std::remainder(a.theta - b.theta, std::numbers::pi / 2.0);
  if (std::abs(dt) < 0.05) return false;
  // Parameter separation keeps sqrt-type transforms away from their origin.
  double d2 = (a.cx - b.cx) * (a.cx - b.cx) + (a.cy - b.cy) * (a.cy - b.cy) +
              (a.w - b.w) * (a.w - b.w) + (a.h - b.h) * (a.h - b.h) +
              (a.theta - b.theta) * (a.theta - b.theta);
  return d2 > 1e-4;
}

// Random pair satisfying smooth_margins_ok; relation (overlap or not)
// unconstrained.
inline std::pair<RotatedBox<double>, RotatedBox<double>> random_smooth_pair(Rng& rng) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    RotatedBox<double> a = random_box(rng, 2.0, 8.0);
    RotatedBox<double> b = random_box(rng, 2.0, 8.0);
    if (smooth_margins_ok(a, b)) return {a, b};
  }
  throw std::runtime_error("smooth pair sampling failed");
}

// True when v sits strictly inside the box with the given margin to every
// edge line.
inline bool corner_inside(const Vec2<double>& v, const RotatedBox<double>& b, double margin) {
  double dx = v.x - b.cx, dy = v.y - b.cy;
  double c = std::cos(b.theta), s = std::sin(b.theta);
  double fx = dx * c + dy * s;
  double fy = -dx * s + dy * c;
  return std::abs(fx) <= 0.5 * b.w - margin && std::abs(fy) <= 0.5 * b.h - margin;
}

// Smooth pair with certain interior overlap (center distance under half the
// smaller inradius), crossing boundaries, and a corner of each box strictly
// inside the other. The last condition rejects two exact-plateau families
// where a finite-difference comparison degenerates to rounding noise over
// the relative-error floor: containment (several components flat), and the
// pinwheel overlap whose clipped arcs are pinned by opposite parallel edges
// so the translation flux cancels over a finite interval.
inline std::pair<RotatedBox<double>, RotatedBox<double>> random_smooth_overlapping_pair(Rng& rng) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    RotatedBox<double> a = random_box(rng, 4.0, 6.0);
    RotatedBox<double> b = random_box(rng, 4.0, 6.0);
    double inr = 0.25 * std::min(std::min(a.w, a.h), std::min(b.w, b.h));
    double cd = std::hypot(a.cx - b.cx, a.cy - b.cy);
    if (cd >= inr || !smooth_margins_ok(a, b)) continue;
    double inter = detail::intersection_area(a, b);
    double smaller = std::min(a.w * a.h, b.w * b.h);
    if (inter <= 0.1 * smaller || inter >= 0.9 * smaller) continue;
    auto ra = corner_ring(a), rb = corner_ring(b);
    bool a_in_b = false, b_in_a = false;
    for (int i = 0; i < 4; ++i) {
      a_in_b = a_in_b || corner_inside(ra[size_t(i)], b, kSmoothMargin);
      b_in_a = b_in_a || corner_inside(rb[size_t(i)], a, kSmoothMargin);
    }
    if (a_in_b && b_in_a) return {a, b};
  }
  throw std::runtime_error("overlapping pair sampling failed");
}

// Smooth pair guaranteed disjoint: center gap exceeds the circumradius sum
// by a safety margin.
inline std::pair<RotatedBox<double>, RotatedBox<double>> random_disjoint_pair(Rng& rng) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    RotatedBox<double> a = random_box(rng, 3.0, 7.0);
    RotatedBox<double> b = random_box(rng, 3.0, 7.0);
    double r = circumradius(a) + circumradius(b) + 0.5;
    double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    b.cx = a.cx + r * std::cos(phi);
    b.cy = a.cy + r * std::sin(phi);
    if (smooth_margins_ok(a, b)) return {a, b};
  }
  throw std::runtime_error("disjoint pair sampling failed");
}

// Box lying strictly inside the image frame.
inline RotatedBox<double> random_in_image_box(Rng& rng, const ImageDims& dims,
                                              double margin = 0.5) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    double smax = 0.25 * std::min(dims.w, dims.h);
    RotatedBox<double> b = random_box(rng, 0.0, 1.0, 0.3 * smax, smax);
    double r = circumradius(b) + margin;
    if (dims.w - 2.0 * r <= 0.0 || dims.h - 2.0 * r <= 0.0) continue;
    b.cx = rng.uniform(r, dims.w - r);
    b.cy = rng.uniform(r, dims.h - r);
    return b;
  }
  throw std::runtime_error("in-image box sampling failed");
}

}  // namespace rotbox
