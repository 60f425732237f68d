// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#include "rotbox/eval.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "rotbox/iou.hpp"

namespace rotbox {

namespace {

// AP for one category at one threshold. preds index into prds and are
// already in match order (descending score, input order on ties).
PrCurve ap_cell(const std::vector<const RotatedBox<double>*>& gts,
                const std::vector<const RotatedBox<double>*>& preds,
                const std::vector<std::vector<double>>& iou, double thr) {
  PrCurve out;
  if (preds.empty() || gts.empty()) return out;
  std::vector<char> taken(gts.size(), 0);
  std::size_t tp = 0;
  out.precision.reserve(preds.size());
  out.recall.reserve(preds.size());
  for (std::size_t p = 0; p < preds.size(); ++p) {
    int best = -1;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (taken[g] || iou[p][g] < thr) continue;
      if (best < 0 || iou[p][g] > iou[p][std::size_t(best)]) best = int(g);
    }
    if (best >= 0) {
      taken[std::size_t(best)] = 1;
      ++tp;
    }
    out.precision.push_back(double(tp) / double(p + 1));
    out.recall.push_back(double(tp) / double(gts.size()));
  }
  // Integrate recall gaps against the running precision envelope.
  double ap = 0.0, prev_recall = 0.0, env = 0.0;
  std::vector<double> envelope(preds.size());
  for (std::size_t i = preds.size(); i-- > 0;) {
    env = std::max(env, out.precision[i]);
    envelope[i] = env;
  }
  for (std::size_t i = 0; i < preds.size(); ++i) {
    ap += (out.recall[i] - prev_recall) * envelope[i];
    prev_recall = out.recall[i];
  }
  out.ap = ap;
  return out;
}

}  // namespace

EvalResult evaluate_ap(const std::vector<GtBox>& gts, const std::vector<ScoredBox>& prds,
                       const std::vector<double>& thresholds) {
  EvalResult r;
  r.thresholds = thresholds;
  r.empty_warning = gts.empty() || prds.empty();

  std::map<std::string, std::vector<const RotatedBox<double>*>> gt_by_cat;
  for (const auto& g : gts) gt_by_cat[g.category].push_back(&g.box);
  for (const auto& [cat, boxes] : gt_by_cat) {
    (void)boxes;
    r.categories.push_back(cat);
  }

  // Stable order: by descending score, input order on ties.
  std::vector<std::size_t> order(prds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return prds[a].score > prds[b].score; });

  r.curves.resize(r.categories.size());
  r.map_per_threshold.assign(thresholds.size(), 0.0);
  for (std::size_t c = 0; c < r.categories.size(); ++c) {
    const auto& cat = r.categories[c];
    const auto& cat_gts = gt_by_cat[cat];
    std::vector<const RotatedBox<double>*> cat_preds;
    for (std::size_t i : order)
      if (prds[i].category == cat) cat_preds.push_back(&prds[i].box);
    // IoU is threshold-independent; compute the category block once.
    std::vector<std::vector<double>> iou(cat_preds.size(),
                                         std::vector<double>(cat_gts.size(), 0.0));
    for (std::size_t p = 0; p < cat_preds.size(); ++p)
      for (std::size_t g = 0; g < cat_gts.size(); ++g)
        iou[p][g] = rotated_iou(*cat_gts[g], *cat_preds[p]);
    r.curves[c].reserve(thresholds.size());
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      r.curves[c].push_back(ap_cell(cat_gts, cat_preds, iou, thresholds[t]));
      r.map_per_threshold[t] += r.curves[c][t].ap;
    }
  }
  if (!r.categories.empty()) {
    for (double& v : r.map_per_threshold) v /= double(r.categories.size());
    for (double v : r.map_per_threshold) r.map += v;
    r.map /= double(thresholds.size());
  }
  return r;
}

}  // namespace rotbox
