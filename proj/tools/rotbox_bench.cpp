// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0
//
// Benchmark: OpenMP kernels against their serial reference twins.
// Each pair must agree bit for bit; timing is wall clock.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <vector>

#include "rotbox/matrix.hpp"
#include "rotbox/oracle.hpp"
#include "rotbox/piou.hpp"
#include "rotbox/sampling.hpp"
#include "rotbox/simulate.hpp"

namespace {

using namespace rotbox;

double ms_of(const std::function<void()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const char* name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-16s %10.2f ms %10.2f ms %8.2fx   %s\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms, identical ? "bitwise equal" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("%-16s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

  Rng rng(20260814);
  RotatedBox<double> a(0.0, 0.0, 6.0, 3.0, 0.35);
  RotatedBox<double> b(0.7, -0.4, 4.5, 4.0, -0.8);

  {
    PiouConfig cfg;
    cfg.grid_step = 0.01;
    double s = 0.0, p = 0.0;
    double ts = ms_of([&] { s = piou_serial(a, b, cfg); });
    double tp = ms_of([&] { p = piou(a, b, cfg); });
    row("piou", ts, tp, std::memcmp(&s, &p, sizeof s) == 0);
  }

  {
    McEstimate s{}, p{};
    const std::uint64_t n = 1u << 24;
    double ts = ms_of([&] { s = mc_intersection_area_serial(a, b, n, 99); });
    double tp = ms_of([&] { p = mc_intersection_area(a, b, n, 99); });
    row("mc_intersection", ts, tp, std::memcmp(&s.mean, &p.mean, sizeof s.mean) == 0);
  }

  {
    double s = 0.0, p = 0.0;
    double ts = ms_of([&] { s = dense_pixel_iou_serial(a, b, 0.005); });
    double tp = ms_of([&] { p = dense_pixel_iou(a, b, 0.005); });
    row("dense_pixel", ts, tp, std::memcmp(&s, &p, sizeof s) == 0);
  }

  {
    std::vector<RotatedBox<double>> gts, prds;
    for (int i = 0; i < 160; ++i) {
      gts.push_back(random_box(rng, -20.0, 20.0));
      prds.push_back(random_box(rng, -20.0, 20.0));
    }
    LossFn fn;
    fn.kind = LossKind::Giou;
    MetricMatrix ms{}, mp{};
    double ts = ms_of([&] { ms = metric_matrix_serial(gts, prds, fn); });
    double tp = ms_of([&] { mp = metric_matrix(gts, prds, fn); });
    bool same = ms.cells.size() == mp.cells.size() &&
                std::memcmp(ms.cells.data(), mp.cells.data(),
                            ms.cells.size() * sizeof(double)) == 0;
    row("metric_matrix", ts, tp, same);
  }

  {
    SimConfig cfg;
    cfg.n_trials = 24;
    cfg.max_iters = 120;
    SimTrace ts_trace{}, tp_trace{};
    double ts = ms_of([&] { ts_trace = simulate_regression_serial(cfg); });
    double tp = ms_of([&] { tp_trace = simulate_regression(cfg); });
    bool same = ts_trace.trials.size() == tp_trace.trials.size();
    for (size_t i = 0; same && i < ts_trace.trials.size(); ++i) {
      const auto& u = ts_trace.trials[i];
      const auto& v = tp_trace.trials[i];
      same = u.size() == v.size();
      for (size_t j = 0; same && j < u.size(); ++j)
        same = std::memcmp(&u[j], &v[j], sizeof(IterRecord)) == 0;
    }
    row("simulate", ts, tp, same);
  }

  return 0;
}
