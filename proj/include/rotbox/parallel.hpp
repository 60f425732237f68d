// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rotbox/dual.hpp"

namespace rotbox {

// Worker cap: OpenMP's limit, optionally reduced by ROTBOX_THREADS. Every
// parallel kernel in this library is written so its result is bitwise
// independent of the worker count; the cap only trades wall time.
inline int worker_count() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  if (const char* env = std::getenv("ROTBOX_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return std::max(n, 1);
}

// Neumaier-compensated accumulator. Used wherever partial results from a
// partitioned loop are combined, so the combined value matches a plain
// serial pass over the same sequence while keeping rounding drift tiny.
template <class S>
struct CompensatedSum;

template <>
struct CompensatedSum<double> {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double get() const { return s + c; }
};

template <>
struct CompensatedSum<Dual> {
  CompensatedSum<double> re, eps;
  void add(const Dual& x) {
    re.add(x.re);
    eps.add(x.eps);
  }
  Dual get() const { return {re.get(), eps.get()}; }
};

}  // namespace rotbox
