// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "rotbox/dual.hpp"

namespace rotbox {

// Vertex coincidence / containment tolerance, in pixels.
inline constexpr double kEpsGeom = 1e-9;
// Relative tolerance for the rectangle test in box_from_corners.
inline constexpr double kEpsRect = 1e-6;

struct NotARectangle : std::runtime_error {
  explicit NotARectangle(const char* what) : std::runtime_error(what) {}
};

template <class S = double>
struct Vec2 {
  S x{}, y{};
};

template <class S>
constexpr Vec2<S> operator+(const Vec2<S>& a, const Vec2<S>& b) {
  return {a.x + b.x, a.y + b.y};
}
template <class S>
constexpr Vec2<S> operator-(const Vec2<S>& a, const Vec2<S>& b) {
  return {a.x - b.x, a.y - b.y};
}
template <class S>
constexpr Vec2<S> operator*(const S& k, const Vec2<S>& v) {
  return {k * v.x, k * v.y};
}
template <class S>
constexpr S dot(const Vec2<S>& a, const Vec2<S>& b) {
  return a.x * b.x + a.y * b.y;
}
template <class S>
constexpr S cross(const Vec2<S>& a, const Vec2<S>& b) {
  return a.x * b.y - a.y * b.x;
}
template <class S>
constexpr S squared_norm(const Vec2<S>& v) {
  return v.x * v.x + v.y * v.y;
}

// Image frame, origin at the top-left corner, x right, y down.
struct ImageDims {
  double w = 0.0;
  double h = 0.0;
};

// Center, side lengths, and rotation of the w-side against the +x axis.
// theta is kept in [-pi/2, pi/2) by shifting whole multiples of pi; w and h
// are never swapped by normalization.
template <class S = double>
struct RotatedBox {
  S cx{}, cy{}, w{}, h{}, theta{};

  RotatedBox() = default;
  RotatedBox(S cx_, S cy_, S w_, S h_, S theta_)
      : cx(cx_), cy(cy_), w(w_), h(h_), theta(theta_) {
    if (!(std::isfinite(value_of(cx)) && std::isfinite(value_of(cy)) &&
          std::isfinite(value_of(theta)) && value_of(w) > 0.0 && value_of(h) > 0.0 &&
          std::isfinite(value_of(w)) && std::isfinite(value_of(h))))
      throw std::invalid_argument("box requires finite params and positive sides");
    constexpr double pi = std::numbers::pi;
    double k = std::floor((value_of(theta) + pi / 2) / pi);
    if (k != 0.0) theta = theta - S(k * pi);
    if (!(value_of(theta) >= -pi / 2 && value_of(theta) < pi / 2)) {
      // Rounding at the upper boundary can land exactly on pi/2.
      if (value_of(theta) >= pi / 2) theta = theta - S(pi);
    }
  }

  S area() const { return w * h; }
};

// Four corners in canonical order: ascending x, ties broken by ascending y.
template <class S = double>
struct CornerQuad {
  std::array<Vec2<S>, 4> p{};
};

// Convex vertex ring, counter-clockwise in the y-down frame, no duplicate
// vertices. Empty means empty region. Degenerate hulls of collinear input
// may carry one or two vertices; their area is zero.
template <class S = double>
struct ConvexPolygon {
  std::vector<Vec2<S>> v;
  bool empty() const { return v.empty(); }
};

// Canonical corner order. Under Dual evaluation a tie in the sort key that
// the perturbation would break is reported as NonSmoothPoint.
template <class S>
CornerQuad<S> sort_corners(const std::array<Vec2<S>, 4>& pts) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      S dx = pts[i].x - pts[j].x;
      guard_tie(dx, kEpsGeom, "corner sort tie in x");
      if (std::abs(value_of(dx)) <= kEpsGeom) guard_tie(pts[i].y - pts[j].y, kEpsGeom, "corner sort tie in y");
    }
  CornerQuad<S> q{pts};
  std::sort(q.p.begin(), q.p.end(), [](const Vec2<S>& a, const Vec2<S>& b) {
    if (value_of(a.x) != value_of(b.x)) return value_of(a.x) < value_of(b.x);
    return value_of(a.y) < value_of(b.y);
  });
  return q;
}

// Corner ring in construction order (counter-clockwise), without the
// canonical sort. Metrics that do not depend on corner correspondence use
// this to avoid spurious sort-tie reports.
template <class S>
std::array<Vec2<S>, 4> corner_ring(const RotatedBox<S>& b) {
  Vec2<S> c{b.cx, b.cy};
  S hw = S(0.5) * b.w, hh = S(0.5) * b.h;
  Vec2<S> u{cos(b.theta), sin(b.theta)};
  Vec2<S> v{-u.y, u.x};
  Vec2<S> du = hw * u, dv = hh * v;
  return {c + du + dv, c - du + dv, c - du - dv, c + du - dv};
}

template <class S>
CornerQuad<S> corners_from_box(const RotatedBox<S>& b) {
  return sort_corners(corner_ring(b));
}

// Signed ring area; positive for counter-clockwise rings in the y-down frame.
template <class S>
S ring_area(std::span<const Vec2<S>> v) {
  if (v.size() < 3) return S(0);
  S a{};
  for (size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) a += cross(v[j], v[i]);
  return S(0.5) * a;
}

template <class S>
S polygon_area(const ConvexPolygon<S>& p) {
  return ring_area(std::span<const Vec2<S>>(p.v));
}

// Orders the four corners into a ring, counter-clockwise around the value
// centroid. Ordering decisions are taken on values only.
template <class S>
std::array<Vec2<S>, 4> to_ring(const CornerQuad<S>& q) {
  double mx = 0.0, my = 0.0;
  for (const auto& p : q.p) {
    mx += value_of(p.x);
    my += value_of(p.y);
  }
  mx *= 0.25;
  my *= 0.25;
  std::array<int, 4> idx{0, 1, 2, 3};
  std::array<double, 4> ang{};
  for (int i = 0; i < 4; ++i)
    ang[i] = std::atan2(value_of(q.p[i].y) - my, value_of(q.p[i].x) - mx);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return ang[a] < ang[b]; });
  return {q.p[idx[0]], q.p[idx[1]], q.p[idx[2]], q.p[idx[3]]};
}

// Unsigned area of the quad's convex ring.
template <class S>
S quad_area(const CornerQuad<S>& q) {
  auto ring = to_ring(q);
  S a = ring_area(std::span<const Vec2<S>>(ring));
  return value_of(a) < 0.0 ? -a : a;
}

template <class S>
ConvexPolygon<S> to_polygon(const CornerQuad<S>& q) {
  auto ring = to_ring(q);
  ConvexPolygon<S> poly{{ring.begin(), ring.end()}};
  if (value_of(polygon_area(poly)) <= 0.0) return {};
  return poly;
}

namespace detail {

// Appends the crossing of segment cur->nxt with the line p->q, where dc and
// dn are the signed areas of (q-p, cur-p) and (q-p, nxt-p).
template <class S>
void push_crossing(std::vector<Vec2<S>>& out, const Vec2<S>& cur, const Vec2<S>& nxt, const S& dc,
                   const S& dn) {
  S t = dc / (dc - dn);
  out.push_back(cur + t * (nxt - cur));
}

template <class S>
void dedup_ring(std::vector<Vec2<S>>& v) {
  auto near = [](const Vec2<S>& a, const Vec2<S>& b) {
    return std::abs(value_of(a.x) - value_of(b.x)) <= kEpsGeom &&
           std::abs(value_of(a.y) - value_of(b.y)) <= kEpsGeom;
  };
  std::vector<Vec2<S>> out;
  out.reserve(v.size());
  for (const auto& p : v)
    if (out.empty() || !near(out.back(), p)) out.push_back(p);
  while (out.size() > 1 && near(out.front(), out.back())) out.pop_back();
  v = std::move(out);
}

}  // namespace detail

// Sutherland-Hodgman clip of convex a against convex b. Both rings must be
// counter-clockwise. Zero-area contact counts as empty. Under Dual
// evaluation, a subject vertex lying on a clip line whose offset the
// perturbation changes is reported as NonSmoothPoint.
template <class S>
ConvexPolygon<S> intersect_convex(const ConvexPolygon<S>& a, const ConvexPolygon<S>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Vec2<S>> out = a.v;
  std::vector<Vec2<S>> in;
  for (size_t e = 0; e < b.v.size() && !out.empty(); ++e) {
    const Vec2<S>& p = b.v[e];
    const Vec2<S>& q = b.v[(e + 1) % b.v.size()];
    Vec2<S> dir = q - p;
    double elen = std::hypot(value_of(dir.x), value_of(dir.y));
    in.swap(out);
    out.clear();
    for (size_t i = 0; i < in.size(); ++i) {
      const Vec2<S>& cur = in[i];
      const Vec2<S>& nxt = in[(i + 1) % in.size()];
      S dc = cross(dir, cur - p);
      S dn = cross(dir, nxt - p);
      guard_tie(dc, kEpsGeom * elen, "clip vertex on clip edge");
      if (value_of(dc) >= 0.0) {
        out.push_back(cur);
        if (value_of(dn) < 0.0) detail::push_crossing(out, cur, nxt, dc, dn);
      } else if (value_of(dn) >= 0.0) {
        detail::push_crossing(out, cur, nxt, dc, dn);
      }
    }
  }
  detail::dedup_ring(out);
  if (out.size() < 3) return {};
  ConvexPolygon<S> poly{std::move(out)};
  if (value_of(polygon_area(poly)) <= 0.0) return {};
  return poly;
}

// Andrew monotone chain hull, counter-clockwise, collinear points dropped.
// Under Dual evaluation a turn decision within tolerance of collinear whose
// sign the perturbation controls is reported as NonSmoothPoint.
template <class S>
ConvexPolygon<S> convex_hull(std::vector<Vec2<S>> pts) {
  if (pts.empty()) return {};
  std::sort(pts.begin(), pts.end(), [](const Vec2<S>& a, const Vec2<S>& b) {
    if (value_of(a.x) != value_of(b.x)) return value_of(a.x) < value_of(b.x);
    return value_of(a.y) < value_of(b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2<S>& a, const Vec2<S>& b) {
                          return value_of(a.x) == value_of(b.x) && value_of(a.y) == value_of(b.y);
                        }),
            pts.end());
  size_t n = pts.size();
  if (n < 3) return {std::move(pts)};
  double scale = 1.0;
  for (const auto& p : pts) scale = std::max({scale, std::abs(value_of(p.x)), std::abs(value_of(p.y))});
  // A point within kEpsGeom of a chord of length ~scale has |cross| of this order.
  double tol = kEpsGeom * 2.0 * scale;
  std::vector<Vec2<S>> h(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2) {
      S turn = cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]);
      guard_tie(turn, tol, "hull turn near collinear");
      if (value_of(turn) > 0.0) break;
      --k;
    }
    h[k++] = pts[i];
  }
  for (size_t i = n - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower) {
      S turn = cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]);
      guard_tie(turn, tol, "hull turn near collinear");
      if (value_of(turn) > 0.0) break;
      --k;
    }
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return {std::move(h)};
}

// Extremum over a span, decided on values. Under Dual evaluation a
// competitor within tol of the winner whose gap the perturbation changes is
// reported as NonSmoothPoint.
template <class S>
S checked_max_of(std::span<const S> xs, double tol) {
  size_t best = 0;
  for (size_t i = 1; i < xs.size(); ++i)
    if (value_of(xs[i]) > value_of(xs[best])) best = i;
  for (size_t i = 0; i < xs.size(); ++i)
    if (i != best) guard_tie(xs[best] - xs[i], tol, "competing extremes in max");
  return xs[best];
}

template <class S>
S checked_min_of(std::span<const S> xs, double tol) {
  size_t best = 0;
  for (size_t i = 1; i < xs.size(); ++i)
    if (value_of(xs[i]) < value_of(xs[best])) best = i;
  for (size_t i = 0; i < xs.size(); ++i)
    if (i != best) guard_tie(xs[i] - xs[best], tol, "competing extremes in min");
  return xs[best];
}

// Width and height of the smallest axis-aligned box covering both quads.
template <class S>
Vec2<S> min_enclosing_aabb(const CornerQuad<S>& a, const CornerQuad<S>& b) {
  std::array<S, 8> xs, ys;
  for (int i = 0; i < 4; ++i) {
    xs[i] = a.p[i].x;
    xs[i + 4] = b.p[i].x;
    ys[i] = a.p[i].y;
    ys[i + 4] = b.p[i].y;
  }
  std::span<const S> sx(xs), sy(ys);
  S w = checked_max_of(sx, kEpsGeom) - checked_min_of(sx, kEpsGeom);
  S h = checked_max_of(sy, kEpsGeom) - checked_min_of(sy, kEpsGeom);
  return {w, h};
}

// Recovers center, sides, and angle from four corners. The corners must
// form a rectangle within kEpsRect relative to its diagonal; otherwise
// NotARectangle is thrown. The w side is the longer one (ties resolve so
// that theta lands in [-pi/4, pi/4)), which makes the reconstruction
// agree with corners_from_box up to the angle normalization.
template <class S>
RotatedBox<S> box_from_corners(const CornerQuad<S>& q) {
  auto r = to_ring(q);
  auto len = [](const Vec2<S>& v) { return sqrt(squared_norm(v)); };
  S s01 = len(r[1] - r[0]), s12 = len(r[2] - r[1]);
  S s23 = len(r[3] - r[2]), s30 = len(r[0] - r[3]);
  S d02 = len(r[2] - r[0]), d13 = len(r[3] - r[1]);
  double tol = kEpsRect * std::max(value_of(d02), value_of(d13));
  if (std::abs(value_of(s01) - value_of(s23)) > tol ||
      std::abs(value_of(s12) - value_of(s30)) > tol ||
      std::abs(value_of(d02) - value_of(d13)) > tol)
    throw NotARectangle("corners do not form a rectangle");
  if (!(value_of(s01) > tol) || !(value_of(s12) > tol))
    throw NotARectangle("degenerate rectangle");

  Vec2<S> c = S(0.25) * (r[0] + r[1] + r[2] + r[3]);
  S a = S(0.5) * (s01 + s23), b = S(0.5) * (s12 + s30);
  Vec2<S> ea = r[1] - r[0], eb = r[2] - r[1];
  constexpr double pi = std::numbers::pi;
  auto side_angle = [](const Vec2<S>& e) {
    S t = atan2(e.y, e.x);
    // Collapse the direction ambiguity of a side into [-pi/2, pi/2).
    double k = std::floor((value_of(t) + pi / 2) / pi);
    return k == 0.0 ? t : t - S(k * pi);
  };
  bool near_square = std::abs(value_of(a) - value_of(b)) <= tol;
  bool a_is_w = near_square ? std::abs(value_of(side_angle(ea))) < pi / 4 + 1e-15
                            : value_of(a) >= value_of(b);
  S w = a_is_w ? a : b;
  S h = a_is_w ? b : a;
  S theta = side_angle(a_is_w ? ea : eb);
  return RotatedBox<S>(c.x, c.y, w, h, theta);
}

}  // namespace rotbox
