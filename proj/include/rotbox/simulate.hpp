// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "rotbox/losses.hpp"

namespace rotbox {

// Amplitude of the random parameter nudge applied when an iteration lands
// on a detected non-smooth configuration.
inline constexpr double kEpsJitter = 1e-7;

// Gradient-descent regression bundle: each trial samples a target box and a
// displaced initial box, then descends the chosen loss in the prediction
// parameters.
struct SimConfig {
  std::uint64_t n_trials = 100;
  LossKind loss = LossKind::Fpdiou;
  double lr = 0.5;
  int max_iters = 500;
  // init distribution: center offset radius, box scale, aspect, angle
  double offset_min = 7.0, offset_max = 8.5;
  double scale_min = 2.2, scale_max = 3.2;
  double aspect_min = 0.5, aspect_max = 2.0;
  double angle_min = -1.4, angle_max = 1.4;
  ImageDims image_dims{8.0, 8.0};
  std::uint64_t seed = 1;
  double stop_tol = 0.05;  // stop a trial when loss < stop_tol; 0 never stops
  PiouConfig piou_cfg{};
  GwdConfig gwd_cfg{};

  void validate() const;
};

struct IterRecord {
  double loss = 0.0;
  double riou = 0.0;        // rotated_iou against the target
  double corner_rms = 0.0;  // RMS distance of corresponding sorted corners
};

struct SimTrace {
  SimConfig cfg;
  std::vector<std::vector<IterRecord>> trials;  // [trial][iteration]
  std::vector<int> jitter_counts;               // non-smooth nudges per trial
};

// Median/percentile digest of a trace.
struct SimSummary {
  double median_final_riou = 0.0;
  double p10_final_riou = 0.0, p90_final_riou = 0.0;
  // Median over all trials of the first iteration reaching
  // riou >= iou_target; trials that never reach it count as +infinity.
  // -1 for an empty trace.
  double median_iters_to_target = -1.0;
  std::uint64_t trials_reached = 0;
  std::uint64_t total_jitters = 0;
};

// First iteration index (1-based) whose record reaches riou >= target, or
// -1 if the trial never does.
int iters_to_reach(const std::vector<IterRecord>& trial, double target);

SimSummary summarize(const SimTrace& trace, double iou_target = 0.7);

// Deterministic under (cfg, seed): per-trial substreams are derived from
// the seed by trial index and results are gathered in index order, so the
// parallel and serial drivers produce identical traces.
SimTrace simulate_regression(const SimConfig& cfg);
SimTrace simulate_regression_serial(const SimConfig& cfg);

}  // namespace rotbox
