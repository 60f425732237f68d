// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0
//
// rotbox: rotated-box metrics, evaluation, and regression experiments.
//
// Exit codes: 0 success, 1 usage/config error, 2 data error (parse,
// geometry, io), 3 numeric error (non-smooth gradient point, singular
// covariance, empty sampling support).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rotbox/config.hpp"
#include "rotbox/csv.hpp"
#include "rotbox/dota.hpp"
#include "rotbox/eval.hpp"
#include "rotbox/grad.hpp"
#include "rotbox/matrix.hpp"
#include "rotbox/oracle.hpp"
#include "rotbox/sampling.hpp"
#include "rotbox/simulate.hpp"

namespace {

using namespace rotbox;

struct GlobalOpts {
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::string out_path;
};

struct MetricKnobs {
  std::string metric = "fpdiou";
  double image_w = 800.0, image_h = 800.0;
  PiouConfig piou;
  GwdConfig gwd;
  bool aabb_enclosure = false;
  std::string gwd_f = "sqrt";
};

void add_metric_knobs(CLI::App* cmd, MetricKnobs& k) {
  cmd->add_option("--metric", k.metric, "metric name")
      ->check(CLI::IsMember({"rotated_iou", "giou", "diou", "ciou", "eiou", "fpdiou", "piou",
                             "gwd", "kld", "kfiou"}))
      ->capture_default_str();
  cmd->add_option("--image-w", k.image_w, "image width (fpdiou normalizer)")
      ->capture_default_str();
  cmd->add_option("--image-h", k.image_h, "image height (fpdiou normalizer)")
      ->capture_default_str();
  cmd->add_option("--piou-k", k.piou.k, "piou sigmoid sharpness")->capture_default_str();
  cmd->add_option("--piou-step", k.piou.grid_step, "piou lattice pitch")->capture_default_str();
  cmd->add_option("--piou-pad", k.piou.pad, "piou lattice margin (<0: two steps)");
  cmd->add_option("--gwd-tau", k.gwd.tau, "gwd tau >= 1")->capture_default_str();
  cmd->add_option("--gwd-f", k.gwd_f, "gwd transform: identity|sqrt|log1p")
      ->check(CLI::IsMember({"identity", "sqrt", "log1p"}))
      ->capture_default_str();
  cmd->add_flag("--aabb-enclosure", k.aabb_enclosure,
                "giou: use the axis-aligned cover instead of the convex hull");
}

LossFn make_loss(const MetricKnobs& k) {
  LossFn fn;
  fn.kind = loss_kind_from(k.metric);
  fn.dims = {k.image_w, k.image_h};
  fn.piou_cfg = k.piou;
  fn.gwd_cfg = k.gwd;
  if (k.gwd_f == "identity") fn.gwd_cfg.f = GwdTransform::Identity;
  else if (k.gwd_f == "log1p") fn.gwd_cfg.f = GwdTransform::Log1p;
  else fn.gwd_cfg.f = GwdTransform::Sqrt;
  fn.enclosure = k.aabb_enclosure ? Enclosure::AxisAligned : Enclosure::ConvexHull;
  return fn;
}

RotatedBox<double> parse_box_arg(const std::string& text, const char* which) {
  std::array<double, 5> v{};
  size_t pos = 0, field = 0;
  while (field < 5) {
    size_t comma = text.find(',', pos);
    std::string tok = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    try {
      size_t used = 0;
      v[field] = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw CLI::ValidationError(std::string(which) + ": bad number '" + tok + "'");
    }
    ++field;
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (field != 5) throw CLI::ValidationError(std::string(which) + " expects cx,cy,w,h,theta");
  return {v[0], v[1], v[2], v[3], v[4]};
}

std::vector<Annotation> load_annotations(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open: " + path);
  return parse_dota(f);
}

std::vector<Prediction> load_predictions(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open: " + path);
  return parse_dota_predictions(f);
}

// Rectangle boxes from annotations; non-rectangles are dropped and counted.
std::vector<RotatedBox<double>> to_boxes(const std::vector<Annotation>& anns, size_t& rejected) {
  std::vector<RotatedBox<double>> boxes;
  boxes.reserve(anns.size());
  for (const auto& a : anns) {
    try {
      boxes.push_back(annotation_to_box(a));
    } catch (const NotARectangle&) {
      ++rejected;
    }
  }
  return boxes;
}

void report_rejects(size_t rejected, const char* what) {
  if (rejected)
    std::cerr << "note: dropped " << rejected << " non-rectangular " << what << " quad(s)\n";
}

int cmd_metric(const GlobalOpts& g, const MetricKnobs& knobs, const std::string& gt_arg,
               const std::string& prd_arg, const std::string& gt_file,
               const std::string& prd_file, bool keep_quads) {
  LossFn fn = make_loss(knobs);
  std::vector<double> values;
  if (!gt_arg.empty() || !prd_arg.empty()) {
    RotatedBox<double> gt = parse_box_arg(gt_arg, "--gt");
    RotatedBox<double> prd = parse_box_arg(prd_arg, "--prd");
    values.push_back(fn.metric(gt, prd));
  } else if (!gt_file.empty() && !prd_file.empty()) {
    auto gts = load_annotations(gt_file);
    auto prds = load_annotations(prd_file);
    if (gts.size() != prds.size())
      throw ParseError(0, 0, "metric file mode needs equally long files (line-paired)");
    if (keep_quads && fn.kind != LossKind::Fpdiou)
      throw CLI::ValidationError("--keep-quads only applies to fpdiou");
    size_t rejected = 0;
    for (size_t i = 0; i < gts.size(); ++i) {
      if (keep_quads) {
        values.push_back(fpdiou_quads(gts[i].quad, prds[i].quad, fn.dims));
        continue;
      }
      try {
        RotatedBox<double> gt = annotation_to_box(gts[i]);
        RotatedBox<double> prd = annotation_to_box(prds[i]);
        values.push_back(fn.metric(gt, prd));
      } catch (const NotARectangle&) {
        ++rejected;
      }
    }
    report_rejects(rejected, "paired");
  } else {
    throw CLI::ValidationError("metric needs either --gt/--prd or --gt-file/--prd-file");
  }
  for (double v : values) std::cout << format_double(v) << '\n';
  if (!g.out_path.empty()) emit_values_csv(values, g.out_path);
  return 0;
}

int cmd_matrix(const GlobalOpts& g, const MetricKnobs& knobs, const std::string& gts_file,
               const std::string& prds_file) {
  LossFn fn = make_loss(knobs);
  size_t rej_gt = 0, rej_prd = 0;
  auto gts = to_boxes(load_annotations(gts_file), rej_gt);
  auto prds = to_boxes(load_annotations(prds_file), rej_prd);
  report_rejects(rej_gt, "gt");
  report_rejects(rej_prd, "prd");
  MetricMatrix m = metric_matrix(gts, prds, fn);
  if (!g.out_path.empty()) {
    emit_matrix_csv(m, g.out_path);
  } else {
    write_matrix_csv(m, std::cout);
  }
  std::cerr << "matrix " << m.rows << "x" << m.cols << " (" << knobs.metric << ")\n";
  return 0;
}

int cmd_eval(const GlobalOpts& g, const MetricKnobs& knobs, const std::string& gts_file,
             const std::string& preds_file, std::vector<double> thresholds) {
  (void)knobs;
  size_t rej_gt = 0, rej_prd = 0;
  auto gt_anns = load_annotations(gts_file);
  auto prd_anns = load_predictions(preds_file);
  std::vector<GtBox> gts;
  for (const auto& a : gt_anns) {
    try {
      gts.push_back({annotation_to_box(a), a.category});
    } catch (const NotARectangle&) {
      ++rej_gt;
    }
  }
  std::vector<ScoredBox> prds;
  for (const auto& p : prd_anns) {
    try {
      prds.push_back({annotation_to_box(p.ann), p.ann.category, p.score});
    } catch (const NotARectangle&) {
      ++rej_prd;
    }
  }
  report_rejects(rej_gt, "gt");
  report_rejects(rej_prd, "prediction");
  if (thresholds.empty()) thresholds = default_thresholds();
  EvalResult r = evaluate_ap(gts, prds, thresholds);
  if (r.empty_warning) std::cerr << "warning: empty ground truth or prediction set\n";
  std::printf("%-24s", "category");
  for (double t : thresholds) std::printf("  AP@%.2f", t);
  std::printf("\n");
  for (size_t c = 0; c < r.categories.size(); ++c) {
    std::printf("%-24s", r.categories[c].c_str());
    for (size_t t = 0; t < thresholds.size(); ++t) std::printf("  %7.4f", r.curves[c][t].ap);
    std::printf("\n");
  }
  std::printf("%-24s", "mean");
  for (size_t t = 0; t < thresholds.size(); ++t) std::printf("  %7.4f", r.map_per_threshold[t]);
  std::printf("\nmAP %.6f\n", r.map);
  if (!g.out_path.empty()) emit_eval_csv(r, g.out_path);
  return 0;
}

int cmd_simulate(const GlobalOpts& g, SimConfig cfg) {
  if (g.seed) cfg.seed = *g.seed;
  SimTrace trace = simulate_regression(cfg);
  SimSummary s = summarize(trace);
  std::printf("loss=%s trials=%llu iters=%d lr=%g seed=%llu\n", to_string(cfg.loss),
              (unsigned long long)cfg.n_trials, cfg.max_iters, cfg.lr,
              (unsigned long long)cfg.seed);
  std::printf("final riou median %.4f  p10 %.4f  p90 %.4f\n", s.median_final_riou,
              s.p10_final_riou, s.p90_final_riou);
  std::printf("reached iou>=0.7 in %llu/%llu trials, median iters %s\n",
              (unsigned long long)s.trials_reached, (unsigned long long)cfg.n_trials,
              format_double(s.median_iters_to_target).c_str());
  if (s.total_jitters)
    std::printf("non-smooth jitters applied: %llu\n", (unsigned long long)s.total_jitters);
  if (!g.out_path.empty()) emit_trace_csv(trace, g.out_path);
  return 0;
}

int cmd_gradcheck(const GlobalOpts& g, const MetricKnobs& knobs, const std::string& loss_name,
                  int n, double h, double tol, bool piou_k_given) {
  std::uint64_t seed = g.seed.value_or(1234);
  std::vector<LossKind> kinds;
  if (loss_name == "all")
    kinds.assign(kAllLossKinds.begin(), kAllLossKinds.end());
  else
    kinds.push_back(loss_kind_from(loss_name));
  // Normalizer matched to the sampling field: a mismatched (huge) image
  // shrinks corner penalties to the finite-difference noise floor.
  MetricKnobs k = knobs;
  k.image_w = 10.0;
  k.image_h = 10.0;
  // Sharper kernel than the piou default: the soft membership has a slope
  // kink of size ~ step^2 * 2k * exp(-k*s) at lattice pixels on a box spine,
  // which finite differences can straddle. k = 25 pushes it below the check
  // tolerance at these box scales.
  if (!piou_k_given) k.piou.k = 25.0;
  std::printf("%-12s %6s %14s\n", "loss", "n", "max_rel_err");
  bool ok = true;
  std::vector<double> worsts;
  for (LossKind kind : kinds) {
    k.metric = to_string(kind);
    LossFn fn = make_loss(k);
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(kind)));
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      auto [gt, prd] = random_smooth_overlapping_pair(rng);
      LossFn frozen = fn.frozen_at(gt, prd);
      GradReport rep = check_grad(frozen, gt, prd, h);
      worst = std::max(worst, rep.max_rel_err);
    }
    std::printf("%-12s %6d %14.3e\n", to_string(kind), n, worst);
    worsts.push_back(worst);
    ok = ok && worst < tol;
  }
  if (!g.out_path.empty()) emit_values_csv(worsts, g.out_path);
  if (!ok) {
    std::cerr << "gradcheck failed: max_rel_err above " << tol << "\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rotated-box similarity metrics, losses, and experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--seed", g.seed, "RNG seed (overrides config file)");
  app.add_option("--config", g.config_path, "key=value config file");
  app.add_option("--out", g.out_path, "CSV output path");

  MetricKnobs knobs;

  auto* metric = app.add_subcommand("metric", "metric value for a pair or paired files");
  std::string gt_arg, prd_arg;
  std::string gt_file, prd_file;
  bool keep_quads = false;
  add_metric_knobs(metric, knobs);
  metric->add_option("--gt", gt_arg, "gt box cx,cy,w,h,theta");
  metric->add_option("--prd", prd_arg, "prd box cx,cy,w,h,theta");
  metric->add_option("--gt-file", gt_file, "gt annotation file");
  metric->add_option("--prd-file", prd_file, "prd annotation file (line-paired)");
  metric->add_flag("--keep-quads", keep_quads, "evaluate raw quads (fpdiou only)");

  auto* matrix = app.add_subcommand("matrix", "pairwise gt x prd metric matrix");
  std::string m_gts, m_prds;
  add_metric_knobs(matrix, knobs);
  matrix->add_option("--gts", m_gts, "gt annotation file")->required();
  matrix->add_option("--prds", m_prds, "prd annotation file")->required();

  auto* eval = app.add_subcommand("eval", "AP/mAP evaluation of scored predictions");
  std::string e_gts, e_preds;
  std::vector<double> e_thresholds;
  eval->add_option("--gts", e_gts, "gt annotation file")->required();
  eval->add_option("--preds", e_preds, "scored prediction file")->required();
  eval->add_option("--thresholds", e_thresholds, "IoU thresholds (default 0.5:0.05:0.95)")
      ->delimiter(',');

  auto* simulate = app.add_subcommand("simulate", "gradient-descent regression trials");
  SimConfig sim_cfg;
  std::string sim_loss;
  simulate->add_option("--loss", sim_loss, "loss to descend")
      ->check(CLI::IsMember({"rotated_iou", "giou", "diou", "ciou", "eiou", "fpdiou", "piou",
                             "gwd", "kld", "kfiou"}));
  simulate->add_option("--trials", sim_cfg.n_trials, "trial count")->capture_default_str();
  simulate->add_option("--iters", sim_cfg.max_iters, "iterations per trial")
      ->capture_default_str();
  simulate->add_option("--lr", sim_cfg.lr, "learning rate")->capture_default_str();

  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient verification");
  std::string gc_loss = "all";
  int gc_n = 100;
  double gc_h = 1e-5, gc_tol = 1e-5;
  add_metric_knobs(gradcheck, knobs);
  gradcheck->add_option("--loss", gc_loss, "loss name or 'all'");
  gradcheck->add_option("--n", gc_n, "configurations per loss")->capture_default_str();
  gradcheck->add_option("--fd-step", gc_h, "relative FD step")->capture_default_str();
  gradcheck->add_option("--tol", gc_tol, "max_rel_err tolerance")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (!g.config_path.empty()) apply_config_file(g.config_path, sim_cfg);
    if (!sim_loss.empty()) sim_cfg.loss = loss_kind_from(sim_loss);
    if (metric->parsed())
      return cmd_metric(g, knobs, gt_arg, prd_arg, gt_file, prd_file, keep_quads);
    if (matrix->parsed()) return cmd_matrix(g, knobs, m_gts, m_prds);
    if (eval->parsed()) return cmd_eval(g, knobs, e_gts, e_preds, e_thresholds);
    if (simulate->parsed()) return cmd_simulate(g, sim_cfg);
    if (gradcheck->parsed())
      return cmd_gradcheck(g, knobs, gc_loss, gc_n, gc_h, gc_tol,
                           gradcheck->count("--piou-k") > 0);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const NonSmoothPoint& e) {
    std::cerr << "numeric error: non-smooth configuration: " << e.what() << "\n";
    return 3;
  } catch (const SingularCovariance& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const EmptySupport& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const GeometryError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const NotARectangle& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
