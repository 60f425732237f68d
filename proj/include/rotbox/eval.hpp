// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "rotbox/geom.hpp"

namespace rotbox {

struct GtBox {
  RotatedBox<double> box;
  std::string category;
};

struct ScoredBox {
  RotatedBox<double> box;
  std::string category;
  double score = 0.0;
};

// Precision/recall walk of one (category, threshold) cell, in the order
// predictions were consumed (descending score).
struct PrCurve {
  std::vector<double> precision, recall;
  double ap = 0.0;
};

struct EvalResult {
  std::vector<double> thresholds;
  std::vector<std::string> categories;       // sorted; only categories with GTs
  std::vector<std::vector<PrCurve>> curves;  // [category][threshold]
  std::vector<double> map_per_threshold;     // mean AP over categories
  double map = 0.0;                          // mean over thresholds
  bool empty_warning = false;                // no GTs or no predictions anywhere
};

inline std::vector<double> default_thresholds() {
  std::vector<double> t;
  for (int i = 0; i <= 9; ++i) t.push_back(0.5 + 0.05 * i);
  return t;
}

// Greedy matching by descending score (ties broken by input order); a
// prediction matches the highest-IoU unmatched GT of its category with
// rotated_iou >= threshold; each GT matches at most once. AP integrates the
// precision envelope over all recall points. Categories without GTs are not
// scored; predictions in such categories are ignored.
EvalResult evaluate_ap(const std::vector<GtBox>& gts, const std::vector<ScoredBox>& prds,
                       const std::vector<double>& thresholds = default_thresholds());

}  // namespace rotbox
