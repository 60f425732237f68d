// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <type_traits>

namespace rotbox {

// Thrown when a derivative is requested at a configuration where the metric
// is not differentiable: a corner-sort tie, a clip vertex sitting on a clip
// edge, or competing extremes inside a min/max. Detection is active only for
// Dual-valued evaluation; plain double evaluation never throws this.
struct NonSmoothPoint : std::runtime_error {
  explicit NonSmoothPoint(const char* what) : std::runtime_error(what) {}
};

// First-order dual number: re carries the value, eps the derivative along
// the one active perturbation direction. The value channel of any composite
// expression is computed by exactly the same double operations as a plain
// evaluation, so re matches the double path bit for bit.
struct Dual {
  double re = 0.0;
  double eps = 0.0;

  constexpr Dual() = default;
  constexpr Dual(double v) : re(v) {}  // constants lift with zero derivative
  constexpr Dual(double v, double d) : re(v), eps(d) {}

  constexpr Dual operator-() const { return {-re, -eps}; }

  Dual& operator+=(const Dual& o) {
    re += o.re;
    eps += o.eps;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    re -= o.re;
    eps -= o.eps;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    eps = eps * o.re + re * o.eps;
    re *= o.re;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    eps = (eps * o.re - re * o.eps) / (o.re * o.re);
    re /= o.re;
    return *this;
  }
};

constexpr Dual operator+(Dual a, const Dual& b) { return {a.re + b.re, a.eps + b.eps}; }
constexpr Dual operator-(Dual a, const Dual& b) { return {a.re - b.re, a.eps - b.eps}; }
constexpr Dual operator*(const Dual& a, const Dual& b) {
  return {a.re * b.re, a.eps * b.re + a.re * b.eps};
}
constexpr Dual operator/(const Dual& a, const Dual& b) {
  return {a.re / b.re, (a.eps * b.re - a.re * b.eps) / (b.re * b.re)};
}

constexpr bool operator==(const Dual& a, const Dual& b) { return a.re == b.re; }
constexpr bool operator!=(const Dual& a, const Dual& b) { return a.re != b.re; }
constexpr bool operator<(const Dual& a, const Dual& b) { return a.re < b.re; }
constexpr bool operator<=(const Dual& a, const Dual& b) { return a.re <= b.re; }
constexpr bool operator>(const Dual& a, const Dual& b) { return a.re > b.re; }
constexpr bool operator>=(const Dual& a, const Dual& b) { return a.re >= b.re; }

// double pass-throughs so unqualified calls in generic code resolve for
// both scalar types.
inline double sqrt(double x) { return std::sqrt(x); }
inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double log1p(double x) { return std::log1p(x); }
inline double atan(double x) { return std::atan(x); }
inline double atan2(double y, double x) { return std::atan2(y, x); }
inline double abs(double x) { return std::abs(x); }
inline double fabs(double x) { return std::fabs(x); }

inline Dual sqrt(const Dual& x) {
  double r = std::sqrt(x.re);
  return {r, x.eps / (2.0 * r)};
}
inline Dual sin(const Dual& x) { return {std::sin(x.re), std::cos(x.re) * x.eps}; }
inline Dual cos(const Dual& x) { return {std::cos(x.re), -std::sin(x.re) * x.eps}; }
inline Dual exp(const Dual& x) {
  double e = std::exp(x.re);
  return {e, e * x.eps};
}
inline Dual log(const Dual& x) { return {std::log(x.re), x.eps / x.re}; }
inline Dual log1p(const Dual& x) { return {std::log1p(x.re), x.eps / (1.0 + x.re)}; }
inline Dual atan(const Dual& x) { return {std::atan(x.re), x.eps / (1.0 + x.re * x.re)}; }
inline Dual atan2(const Dual& y, const Dual& x) {
  double d = x.re * x.re + y.re * y.re;
  return {std::atan2(y.re, x.re), (x.re * y.eps - y.re * x.eps) / d};
}

// |x| has no derivative at exactly zero; an eps-carrying zero is reported
// rather than silently assigned a sign.
inline Dual abs(const Dual& x) {
  if (x.re > 0.0) return x;
  if (x.re < 0.0) return -x;
  if (x.eps != 0.0) throw NonSmoothPoint("abs at zero with nonzero perturbation");
  return {0.0, 0.0};
}
inline Dual fabs(const Dual& x) { return abs(x); }

template <class S>
struct is_dual : std::false_type {};
template <>
struct is_dual<Dual> : std::true_type {};
template <class S>
inline constexpr bool is_dual_v = is_dual<S>::value;

constexpr double value_of(double x) { return x; }
constexpr double value_of(const Dual& x) { return x.re; }
constexpr double deriv_of(double) { return 0.0; }
constexpr double deriv_of(const Dual& x) { return x.eps; }

// Flags a near-tie that the active perturbation would reorder. diff is the
// quantity whose sign decides a branch (a coordinate gap, a cross product).
template <class S>
inline void guard_tie(const S& diff, double tol, const char* site) {
  if constexpr (is_dual_v<S>) {
    if (std::abs(diff.re) <= tol && diff.eps != 0.0) throw NonSmoothPoint(site);
  } else {
    (void)diff;
    (void)tol;
    (void)site;
  }
}

}  // namespace rotbox
