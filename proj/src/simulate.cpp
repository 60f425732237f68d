// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#include "rotbox/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rotbox/grad.hpp"
#include "rotbox/parallel.hpp"
#include "rotbox/rng.hpp"

namespace rotbox {

namespace {

constexpr double kMinSide = 1e-3;
constexpr int kMaxJitterAttempts = 16;

struct Params {
  std::array<double, 5> p;
  RotatedBox<double> box() const { return {p[0], p[1], p[2], p[3], p[4]}; }
};

RotatedBox<double> sample_box(Rng& rng, double cx, double cy, const SimConfig& c) {
  double s = rng.uniform(c.scale_min, c.scale_max);
  double a = rng.uniform(c.aspect_min, c.aspect_max);
  double theta = rng.uniform(c.angle_min, c.angle_max);
  return {cx, cy, s * std::sqrt(a), s / std::sqrt(a), theta};
}

double corner_rms(const RotatedBox<double>& a, const RotatedBox<double>& b) {
  CornerQuad<double> qa = corners_from_box(a), qb = corners_from_box(b);
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += value_of(squared_norm(qa.p[i] - qb.p[i]));
  return std::sqrt(0.25 * s);
}

std::vector<IterRecord> run_trial(const SimConfig& cfg, const LossFn& base, std::uint64_t trial,
                                  int& jitters) {
  Rng rng(derive_seed(cfg.seed, trial));
  double cx = 0.5 * cfg.image_dims.w, cy = 0.5 * cfg.image_dims.h;
  RotatedBox<double> target = sample_box(rng, cx, cy, cfg);
  double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  double dist = rng.uniform(cfg.offset_min, cfg.offset_max);
  RotatedBox<double> init =
      sample_box(rng, cx + dist * std::cos(phi), cy + dist * std::sin(phi), cfg);

  Params p{{init.cx, init.cy, init.w, init.h, init.theta}};
  std::vector<IterRecord> records;
  records.reserve(static_cast<size_t>(cfg.max_iters));
  for (int it = 0; it < cfg.max_iters; ++it) {
    std::array<double, 5> g{};
    for (int attempt = 0;; ++attempt) {
      try {
        RotatedBox<double> prd = p.box();
        LossFn fn = base.frozen_at(target, prd);
        g = grad_prd(fn, target, prd);
        break;
      } catch (const NonSmoothPoint&) {
        if (attempt >= kMaxJitterAttempts) break;  // proceed with zero step
        ++jitters;
        for (double& v : p.p) v += kEpsJitter * rng.uniform(-1.0, 1.0);
        p.p[2] = std::max(p.p[2], kMinSide);
        p.p[3] = std::max(p.p[3], kMinSide);
      }
    }
    for (int i = 0; i < 5; ++i) {
      double next = p.p[i] - cfg.lr * g[i];
      if (std::isfinite(next)) p.p[i] = next;
    }
    p.p[2] = std::max(p.p[2], kMinSide);
    p.p[3] = std::max(p.p[3], kMinSide);

    RotatedBox<double> prd = p.box();
    IterRecord rec;
    rec.loss = base.frozen_at(target, prd)(target, prd);
    rec.riou = rotated_iou(target, prd);
    rec.corner_rms = corner_rms(target, prd);
    records.push_back(rec);
    if (cfg.stop_tol > 0.0 && rec.loss < cfg.stop_tol) break;
  }
  return records;
}

template <bool Parallel>
SimTrace simulate_impl(const SimConfig& cfg) {
  cfg.validate();
  SimTrace trace;
  trace.cfg = cfg;
  trace.trials.resize(cfg.n_trials);
  trace.jitter_counts.assign(cfg.n_trials, 0);
  LossFn base;
  base.kind = cfg.loss;
  base.dims = cfg.image_dims;
  base.piou_cfg = cfg.piou_cfg;
  base.gwd_cfg = cfg.gwd_cfg;
  const long n = static_cast<long>(cfg.n_trials);
#ifdef _OPENMP
#pragma omp parallel for num_threads(worker_count()) schedule(static) if (Parallel)
#endif
  for (long t = 0; t < n; ++t) {
    int jitters = 0;
    trace.trials[static_cast<size_t>(t)] =
        run_trial(cfg, base, static_cast<std::uint64_t>(t), jitters);
    trace.jitter_counts[static_cast<size_t>(t)] = jitters;
  }
  return trace;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double percentile_of(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  double idx = q * double(v.size() - 1);
  size_t lo = static_cast<size_t>(idx);
  size_t hi = std::min(lo + 1, v.size() - 1);
  double frac = idx - double(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

}  // namespace

void SimConfig::validate() const {
  if (!(lr > 0.0) || max_iters < 1 || !(image_dims.w > 0.0) || !(image_dims.h > 0.0) ||
      !(offset_min <= offset_max) || !(scale_min <= scale_max) || !(scale_min > 0.0) ||
      !(aspect_min <= aspect_max) || !(aspect_min > 0.0) || !(angle_min <= angle_max))
    throw std::invalid_argument("invalid simulation config");
}

int iters_to_reach(const std::vector<IterRecord>& trial, double target) {
  for (size_t i = 0; i < trial.size(); ++i)
    if (trial[i].riou >= target) return int(i) + 1;
  return -1;
}

SimSummary summarize(const SimTrace& trace, double iou_target) {
  SimSummary s;
  if (trace.trials.empty()) {
    s.median_iters_to_target = -1.0;
    return s;
  }
  std::vector<double> finals, iters;
  for (const auto& t : trace.trials) {
    finals.push_back(t.empty() ? 0.0 : t.back().riou);
    int reach = iters_to_reach(t, iou_target);
    if (reach > 0) {
      ++s.trials_reached;
      iters.push_back(double(reach));
    } else {
      iters.push_back(std::numeric_limits<double>::infinity());
    }
  }
  for (int j : trace.jitter_counts) s.total_jitters += std::uint64_t(j);
  s.median_final_riou = median_of(finals);
  s.p10_final_riou = percentile_of(finals, 0.10);
  s.p90_final_riou = percentile_of(finals, 0.90);
  s.median_iters_to_target = median_of(iters);
  return s;
}

SimTrace simulate_regression(const SimConfig& cfg) { return simulate_impl<true>(cfg); }

SimTrace simulate_regression_serial(const SimConfig& cfg) { return simulate_impl<false>(cfg); }

}  // namespace rotbox
