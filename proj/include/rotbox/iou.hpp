// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <numbers>
#include <span>
#include <vector>

#include "rotbox/geom.hpp"

namespace rotbox {

// Covering region used by the generalized-IoU penalty.
enum class Enclosure { ConvexHull, AxisAligned };

namespace detail {

// Boxes shifted so the midpoint of the two centers sits at the origin.
// Clipping, hulls, and areas then work on small coordinates regardless of
// where the pair sits in the image. The shift is computed from values only,
// so Dual derivatives and the double value path are unaffected.
template <class S>
struct CenteredPair {
  RotatedBox<S> a, b;
};

template <class S>
CenteredPair<S> center_pair(const RotatedBox<S>& a, const RotatedBox<S>& b) {
  double sx = 0.5 * (value_of(a.cx) + value_of(b.cx));
  double sy = 0.5 * (value_of(a.cy) + value_of(b.cy));
  CenteredPair<S> c{a, b};
  c.a.cx = a.cx - S(sx);
  c.a.cy = a.cy - S(sy);
  c.b.cx = b.cx - S(sx);
  c.b.cy = b.cy - S(sy);
  return c;
}

template <class S>
ConvexPolygon<S> box_polygon(const RotatedBox<S>& b) {
  auto ring = corner_ring(b);
  return {{ring.begin(), ring.end()}};
}

// True when the two corner sets coincide exactly in value.
template <class S>
bool same_corner_values(const RotatedBox<S>& a, const RotatedBox<S>& b) {
  auto key = [](const RotatedBox<S>& x) {
    auto ring = corner_ring(x);
    std::array<std::pair<double, double>, 4> k;
    for (int i = 0; i < 4; ++i) k[i] = {value_of(ring[i].x), value_of(ring[i].y)};
    std::sort(k.begin(), k.end());
    return k;
  };
  return key(a) == key(b);
}

// True when every corner of a has a corner of b within kEpsGeom. Distinct
// corners of a rectangle are at least min(w,h) apart, so the match is a
// bijection whenever it exists. Catches symmetry-equivalent boxes (a square
// and its quarter turn) whose trig-evaluated corners differ in the last
// bits, where an exact comparison and the coordinate sort both misfire.
template <class S>
bool congruent_corner_values(const RotatedBox<S>& a, const RotatedBox<S>& b) {
  auto ra = corner_ring(a), rb = corner_ring(b);
  for (int i = 0; i < 4; ++i) {
    bool found = false;
    for (int j = 0; j < 4 && !found; ++j) {
      double dx = value_of(ra[i].x) - value_of(rb[j].x);
      double dy = value_of(ra[i].y) - value_of(rb[j].y);
      found = std::abs(dx) <= kEpsGeom && std::abs(dy) <= kEpsGeom;
    }
    if (!found) return false;
  }
  return true;
}

// Orders the pair by value tuple so clipping runs in a fixed argument order
// and the metric is symmetric bit for bit.
template <class S>
bool tuple_less(const RotatedBox<S>& a, const RotatedBox<S>& b) {
  auto key = [](const RotatedBox<S>& x) {
    return std::array<double, 5>{value_of(x.cx), value_of(x.cy), value_of(x.w), value_of(x.h),
                                 value_of(x.theta)};
  };
  return key(a) < key(b);
}

template <class S>
S intersection_area(const RotatedBox<S>& a, const RotatedBox<S>& b) {
  const bool a_first = tuple_less(a, b);
  auto pa = box_polygon(a_first ? a : b);
  auto pb = box_polygon(a_first ? b : a);
  return polygon_area(intersect_convex(pa, pb));
}

template <class S>
Vec2<S> enclosing_extents(const RotatedBox<S>& a, const RotatedBox<S>& b) {
  auto ra = corner_ring(a), rb = corner_ring(b);
  std::array<S, 8> xs, ys;
  for (int i = 0; i < 4; ++i) {
    xs[i] = ra[i].x;
    xs[i + 4] = rb[i].x;
    ys[i] = ra[i].y;
    ys[i + 4] = rb[i].y;
  }
  std::span<const S> sx(xs), sy(ys);
  S w = checked_max_of(sx, kEpsGeom) - checked_min_of(sx, kEpsGeom);
  S h = checked_max_of(sy, kEpsGeom) - checked_min_of(sy, kEpsGeom);
  return {w, h};
}

}  // namespace detail

// Exact polygon-clipping IoU. 1 for coinciding boxes, 0 iff the interiors
// are disjoint (zero-area contact counts as disjoint).
template <class S>
S rotated_iou(const RotatedBox<S>& gt, const RotatedBox<S>& prd) {
  if (detail::same_corner_values(gt, prd)) return S(1);
  auto c = detail::center_pair(gt, prd);
  S inter = detail::intersection_area(c.a, c.b);
  S uni = c.a.area() + c.b.area() - inter;
  return inter / uni;
}

// IoU minus the covering-region penalty (area(C) - union) / area(C).
// Range (-1, 1]; equals IoU when the union fills its cover.
template <class S>
S giou(const RotatedBox<S>& gt, const RotatedBox<S>& prd,
       Enclosure enc = Enclosure::ConvexHull) {
  auto c = detail::center_pair(gt, prd);
  S inter = detail::same_corner_values(gt, prd) ? c.a.area() : detail::intersection_area(c.a, c.b);
  S uni = c.a.area() + c.b.area() - inter;
  S cover;
  if (enc == Enclosure::ConvexHull) {
    auto ra = corner_ring(c.a), rb = corner_ring(c.b);
    std::vector<Vec2<S>> pts(ra.begin(), ra.end());
    pts.insert(pts.end(), rb.begin(), rb.end());
    cover = polygon_area(convex_hull(std::move(pts)));
  } else {
    Vec2<S> ext = detail::enclosing_extents(c.a, c.b);
    cover = ext.x * ext.y;
  }
  return inter / uni - (cover - uni) / cover;
}

// IoU minus the squared center distance over the squared diagonal of the
// axis-aligned cover.
template <class S>
S diou(const RotatedBox<S>& gt, const RotatedBox<S>& prd) {
  S iou = rotated_iou(gt, prd);
  Vec2<S> ext = detail::enclosing_extents(gt, prd);
  S dx = gt.cx - prd.cx, dy = gt.cy - prd.cy;
  return iou - (dx * dx + dy * dy) / (ext.x * ext.x + ext.y * ext.y);
}

// DIoU minus the aspect-consistency term alpha * V with
// V = (4/pi^2) (atan(w_gt/h_gt) - atan(w_prd/h_prd))^2. When V is exactly
// zero the term vanishes and alpha is taken as zero.
template <class S>
S ciou(const RotatedBox<S>& gt, const RotatedBox<S>& prd) {
  S iou = rotated_iou(gt, prd);
  Vec2<S> ext = detail::enclosing_extents(gt, prd);
  S dx = gt.cx - prd.cx, dy = gt.cy - prd.cy;
  S d = iou - (dx * dx + dy * dy) / (ext.x * ext.x + ext.y * ext.y);
  constexpr double pi = std::numbers::pi;
  S da = atan(gt.w / gt.h) - atan(prd.w / prd.h);
  if (value_of(da) == 0.0) return d;
  S v = S(4.0 / (pi * pi)) * da * da;
  S alpha = v / (S(1) - iou + v);
  return d - alpha * v;
}

// DIoU with the aspect term split into separate width and height ratios
// against the axis-aligned cover.
template <class S>
S eiou(const RotatedBox<S>& gt, const RotatedBox<S>& prd) {
  S iou = rotated_iou(gt, prd);
  Vec2<S> ext = detail::enclosing_extents(gt, prd);
  S dx = gt.cx - prd.cx, dy = gt.cy - prd.cy;
  S dw = gt.w - prd.w, dh = gt.h - prd.h;
  return iou - (dx * dx + dy * dy) / (ext.x * ext.x + ext.y * ext.y) -
         (dw * dw) / (ext.x * ext.x) - (dh * dh) / (ext.y * ext.y);
}

// IoU minus the mean squared distance between corresponding canonical
// corners, normalized by 4 (W^2 + H^2) of the image frame. For boxes inside
// the image the value lies in (-1, 1].
template <class S>
S fpdiou_quads(const CornerQuad<S>& gt, const CornerQuad<S>& prd, const ImageDims& dims) {
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < 4; ++i) {
    sx += value_of(gt.p[i].x) + value_of(prd.p[i].x);
    sy += value_of(gt.p[i].y) + value_of(prd.p[i].y);
  }
  sx /= 8.0;
  sy /= 8.0;
  auto shift = [&](const CornerQuad<S>& q) {
    CornerQuad<S> out = q;
    for (auto& p : out.p) {
      p.x = p.x - S(sx);
      p.y = p.y - S(sy);
    }
    return out;
  };
  CornerQuad<S> qa = shift(gt), qb = shift(prd);
  S inter = polygon_area(intersect_convex(to_polygon(qa), to_polygon(qb)));
  S uni = quad_area(qa) + quad_area(qb) - inter;
  S iou = inter / uni;
  S penalty{};
  for (int i = 0; i < 4; ++i) penalty += squared_norm(qa.p[i] - qb.p[i]);
  return iou - penalty / S(4.0 * (dims.w * dims.w + dims.h * dims.h));
}

// Box form: the IoU term is exactly rotated_iou; the corner penalty pairs
// the canonical (sorted) corners of both boxes.
template <class S>
S fpdiou(const RotatedBox<S>& gt, const RotatedBox<S>& prd, const ImageDims& dims) {
  // Equal corner sets: the boxes coincide, the penalty sits at the flat
  // minimum of its bowl, and the metric is exactly one with zero derivative.
  // Covers prd=gt and symmetry-equivalent parameterizations (square rotated
  // a quarter turn), where the corner sort would otherwise report its tie.
  if (detail::congruent_corner_values(gt, prd)) return S(1);
  S iou = rotated_iou(gt, prd);
  auto c = detail::center_pair(gt, prd);
  CornerQuad<S> qa = corners_from_box(c.a);
  CornerQuad<S> qb = corners_from_box(c.b);
  S penalty{};
  for (int i = 0; i < 4; ++i) penalty += squared_norm(qa.p[i] - qb.p[i]);
  return iou - penalty / S(4.0 * (dims.w * dims.w + dims.h * dims.h));
}

template <class S>
S loss_of(const S& metric) {
  return S(1) - metric;
}

}  // namespace rotbox
