// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "rotbox/config.hpp"
#include "rotbox/csv.hpp"
#include "rotbox/dota.hpp"
#include "rotbox/eval.hpp"
#include "rotbox/matrix.hpp"
#include "rotbox/simulate.hpp"

using namespace rotbox;

namespace {

std::vector<Annotation> parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_dota(in);
}

bool same_quad(const CornerQuad<double>& a, const CornerQuad<double>& b) {
  for (int i = 0; i < 4; ++i)
    if (a.p[i].x != b.p[i].x || a.p[i].y != b.p[i].y) return false;
  return true;
}

bool same_trace(const SimTrace& a, const SimTrace& b) {
  if (a.trials.size() != b.trials.size() || a.jitter_counts != b.jitter_counts) return false;
  for (size_t t = 0; t < a.trials.size(); ++t) {
    if (a.trials[t].size() != b.trials[t].size()) return false;
    for (size_t i = 0; i < a.trials[t].size(); ++i) {
      const IterRecord &x = a.trials[t][i], &y = b.trials[t][i];
      if (x.loss != y.loss || x.riou != y.riou || x.corner_rms != y.corner_rms) return false;
    }
  }
  return true;
}

GtBox gt_of(const RotatedBox<double>& b, const std::string& cat) { return {b, cat}; }

ScoredBox prd_of(const RotatedBox<double>& b, const std::string& cat, double score) {
  return {b, cat, score};
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("annotation files parse through headers, CRLF, and blank lines") {
  auto anns = parse_text(
      "imagesource:GoogleEarth\n"
      "gsd:0.146343590398\n"
      "\n"
      "0 0 4 0 4 2 0 2 plane 0\r\n"
      "10.5 10 16.5 10 16.5 14 10.5 14 soccer-ball-field 1\n");
  REQUIRE(anns.size() == 2);
  CHECK(anns[0].category == "plane");
  CHECK(anns[0].difficulty == 0);
  CHECK(anns[1].category == "soccer-ball-field");
  CHECK(anns[1].difficulty == 1);
  CHECK(quad_area(anns[0].quad) == doctest::Approx(8.0).epsilon(1e-12));

  RotatedBox<double> b0 = annotation_to_box(anns[0]);
  CHECK(b0.cx == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b0.cy == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b0.w == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(b0.h == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b0.theta == doctest::Approx(0.0).epsilon(1e-12));

  RotatedBox<double> b1 = annotation_to_box(anns[1]);
  CHECK(b1.cx == doctest::Approx(13.5).epsilon(1e-12));
  CHECK(b1.w == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(b1.h == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("stored quads are canonical regardless of ring start and direction") {
  auto a = parse_text("0 0 4 0 4 2 0 2 plane 0\n");
  auto b = parse_text("4 2 0 2 0 0 4 0 plane 0\n");   // rotated start
  auto c = parse_text("0 0 0 2 4 2 4 0 plane 0\n");   // opposite direction
  REQUIRE(a.size() == 1);
  CHECK(same_quad(a[0].quad, b[0].quad));
  CHECK(same_quad(a[0].quad, c[0].quad));
}

TEST_CASE("vertical rectangles take the long-edge reading") {
  auto anns = parse_text("0 0 2 0 2 6 0 6 plane 0\n");
  RotatedBox<double> b = annotation_to_box(anns[0]);
  CHECK(b.w == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(b.h == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b.theta == doctest::Approx(-std::numbers::pi / 2).epsilon(1e-12));
}

TEST_CASE("a rotated box round-trips through its annotation text") {
  RotatedBox<double> src(3, 4, 5, 2, 0.7);
  auto q = corner_ring(src);
  char line[256];
  std::snprintf(line, sizeof line, "%.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g bridge 2\n",
                q[0].x, q[0].y, q[1].x, q[1].y, q[2].x, q[2].y, q[3].x, q[3].y);
  auto anns = parse_text(line);
  RotatedBox<double> back = annotation_to_box(anns[0]);
  CHECK(back.cx == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(back.cy == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(back.w == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(back.h == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(back.theta == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("parse errors carry line and token positions") {
  try {
    parse_text("0 0 4 0 4 2 0 2 plane 0\n0 0 1 0 1 1 0\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.column == 7);
    CHECK(std::string(e.what()).find("expected 10 fields, got 7") != std::string::npos);
  }

  try {
    parse_text("0 0 abc 0 4 2 0 2 plane 0\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.column == 3);
    CHECK(std::string(e.what()).find("expected a number") != std::string::npos);
  }

  CHECK_THROWS_WITH_AS(parse_text("0 0 inf 0 4 2 0 2 plane 0\n"),
                       doctest::Contains("non-finite"), ParseError);

  try {
    parse_text("0 0 4 0 4 2 0 2 plane x\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.column == 10);
    CHECK(std::string(e.what()).find("expected an integer") != std::string::npos);
  }
}

TEST_CASE("self-intersecting and degenerate quads are geometry errors") {
  try {
    parse_text("0 0 4 0 4 2 0 2 plane 0\n0 0 4 4 4 0 0 4 plane 0\n");
    FAIL("expected GeometryError");
  } catch (const GeometryError& e) {
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("self-intersecting") != std::string::npos);
  }
  CHECK_THROWS_WITH_AS(parse_text("0 0 1 0 2 0 3 0 plane 0\n"), doctest::Contains("degenerate"),
                       GeometryError);
  // A clean but non-rectangular quad parses; the box reading rejects it.
  auto trap = parse_text("0 0 4 0 3 2 1 2 plane 0\n");
  CHECK_THROWS_AS(annotation_to_box(trap[0]), NotARectangle);
}

TEST_CASE("prediction files append a score column") {
  std::istringstream in(
      "0 0 4 0 4 2 0 2 plane 0 0.875\n"
      "0 0 2 0 2 6 0 6 bridge 1 0.25\n");
  auto prds = parse_dota_predictions(in);
  REQUIRE(prds.size() == 2);
  CHECK(prds[0].score == 0.875);
  CHECK(prds[0].ann.category == "plane");
  CHECK(prds[1].score == 0.25);

  std::istringstream short_row("0 0 4 0 4 2 0 2 plane 0\n");
  CHECK_THROWS_WITH_AS(parse_dota_predictions(short_row),
                       doctest::Contains("expected 11 fields, got 10"), ParseError);

  std::istringstream bad_score("0 0 4 0 4 2 0 2 plane 0 high\n");
  try {
    parse_dota_predictions(bad_score);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.column == 11);
  }
}

TEST_CASE("config overlay covers every key") {
  std::istringstream in(
      "# full overlay\n"
      "n_trials = 7\n"
      "loss = kld   # comment after value\n"
      "lr=0.125\n"
      "max_iters = 42\n"
      "offset_min = 1.5\n"
      "offset_max = 2.5\n"
      "scale_min = 0.75\n"
      "scale_max = 1.25\n"
      "aspect_min = 0.8\n"
      "aspect_max = 1.2\n"
      "angle_min = -0.5\n"
      "angle_max = 0.5\n"
      "image_w = 64\n"
      "image_h = 32\n"
      "seed = 99\n"
      "stop_tol = 0.01\n"
      "piou_k = 12.5\n"
      "piou_step = 0.25\n"
      "piou_pad = 1.5\n"
      "gwd_tau = 2\n"
      "gwd_f = log1p\n");
  SimConfig cfg;
  apply_config(in, cfg);
  CHECK(cfg.n_trials == 7);
  CHECK(cfg.loss == LossKind::Kld);
  CHECK(cfg.lr == 0.125);
  CHECK(cfg.max_iters == 42);
  CHECK(cfg.offset_min == 1.5);
  CHECK(cfg.offset_max == 2.5);
  CHECK(cfg.scale_min == 0.75);
  CHECK(cfg.scale_max == 1.25);
  CHECK(cfg.aspect_min == 0.8);
  CHECK(cfg.aspect_max == 1.2);
  CHECK(cfg.angle_min == -0.5);
  CHECK(cfg.angle_max == 0.5);
  CHECK(cfg.image_dims.w == 64.0);
  CHECK(cfg.image_dims.h == 32.0);
  CHECK(cfg.seed == 99);
  CHECK(cfg.stop_tol == 0.01);
  CHECK(cfg.piou_cfg.k == 12.5);
  CHECK(cfg.piou_cfg.grid_step == 0.25);
  CHECK(cfg.piou_cfg.pad == 1.5);
  CHECK(cfg.gwd_cfg.tau == 2.0);
  CHECK(cfg.gwd_cfg.f == GwdTransform::Log1p);
  cfg.validate();
}

TEST_CASE("config rejections name the offence") {
  SimConfig cfg;
  auto apply = [&](const std::string& text) {
    std::istringstream in(text);
    apply_config(in, cfg);
  };
  CHECK_THROWS_WITH_AS(apply("lr 0.5\n"), doctest::Contains("expected key=value"), ConfigError);
  CHECK_THROWS_WITH_AS(apply("= 3\n"), doctest::Contains("empty key or value"), ConfigError);
  CHECK_THROWS_WITH_AS(apply("lr =\n"), doctest::Contains("empty key or value"), ConfigError);
  CHECK_THROWS_WITH_AS(apply("warp = 1\n"), doctest::Contains("unknown config key 'warp'"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(apply("lr = abc\n"), doctest::Contains("expected a number"), ConfigError);
  CHECK_THROWS_WITH_AS(apply("n_trials = -3\n"), doctest::Contains("non-negative integer"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(apply("loss = zzz\n"), doctest::Contains("loss"), ConfigError);
  CHECK_THROWS_WITH_AS(apply("gwd_f = bogus\n"), doctest::Contains("identity|sqrt|log1p"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(apply_config_file("/nonexistent_dir_xyz/cfg.txt", cfg),
                       doctest::Contains("cannot open"), ConfigError);
  // Errors report the failing line.
  CHECK_THROWS_WITH_AS(apply("lr = 0.5\nmystery\n"), doctest::Contains("line 2"), ConfigError);
}

TEST_CASE("format_double is stable and round-trips") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(42.0) == "42");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  for (double x : {1.0 / 3.0, 0.1, 1e300, 5e-324, -2.5, 12345678.9}) {
    std::string s = format_double(x);
    double back = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(ec == std::errc{});
    CHECK(ptr == s.data() + s.size());
    CHECK(back == x);
  }
}

TEST_CASE("csv_escape quotes only when needed") {
  CHECK(csv_escape("plain-field_1") == "plain-field_1");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("line\nbreak") == "\"line\nbreak\"");
  CHECK(csv_escape("cr\rend") == "\"cr\rend\"");
  CHECK(csv_escape("") == "");
}

TEST_CASE("csv writers emit exact golden bytes") {
  std::ostringstream vs;
  write_values_csv({1.5, -0.25}, vs);
  CHECK(vs.str() == "index,value\n0,1.5\n1,-0.25\n");

  MetricMatrix m;
  m.rows = 1;
  m.cols = 2;
  m.cells = {0.5, 1.0};
  std::ostringstream ms;
  write_matrix_csv(m, ms);
  CHECK(ms.str() == "gt,prd,value\n0,0,0.5\n0,1,1\n");

  SimTrace tr;
  tr.trials = {{{0.5, 0.25, 1.5}, {0.25, 0.5, 1.0}}, {{0.125, 0.75, 0.5}}};
  tr.jitter_counts = {0, 0};
  std::ostringstream ts;
  write_trace_csv(tr, ts);
  CHECK(ts.str() ==
        "trial,iter,loss,riou,corner_rms\n"
        "0,1,0.5,0.25,1.5\n"
        "0,2,0.25,0.5,1\n"
        "1,1,0.125,0.75,0.5\n");
}

TEST_CASE("eval csv shape: header, per-category rows, ALL rows, mean last") {
  std::vector<GtBox> gts = {gt_of({5, 5, 2, 2, 0}, "car")};
  std::vector<ScoredBox> prds = {prd_of({5, 5, 2, 2, 0}, "car", 0.9)};
  EvalResult r = evaluate_ap(gts, prds);
  std::ostringstream os;
  write_eval_csv(r, os);
  std::string text = os.str();
  CHECK(text.rfind("category,threshold,ap\n", 0) == 0);
  CHECK(text.find("car,0.5,1\n") != std::string::npos);
  CHECK(text.substr(text.size() - 11) == "ALL,mean,1\n");
  size_t lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  // header + 1 category x 10 thresholds + 10 ALL rows + mean.
  CHECK(lines == 22);
}

TEST_CASE("emit writes files and reports io failures") {
  const std::string path = "/tmp/rotbox_test_values.csv";
  emit_values_csv({2.0}, path);
  std::ifstream f(path, std::ios::binary);
  std::stringstream back;
  back << f.rdbuf();
  CHECK(back.str() == "index,value\n0,2\n");
  std::remove(path.c_str());
  CHECK_THROWS_AS(emit_values_csv({1.0}, "/nonexistent_dir_xyz/v.csv"), IoError);
}

TEST_CASE("ap rewards late true positives through the envelope") {
  std::vector<GtBox> gts = {gt_of({5, 5, 2, 2, 0}, "car")};
  // Higher-scored miss first, exact hit second.
  std::vector<ScoredBox> prds = {prd_of({20, 20, 2, 2, 0}, "car", 0.9),
                                 prd_of({5, 5, 2, 2, 0}, "car", 0.1)};
  EvalResult r = evaluate_ap(gts, prds, {0.5});
  REQUIRE(r.curves.size() == 1);
  const PrCurve& c = r.curves[0][0];
  CHECK(c.precision == std::vector<double>{0.0, 0.5});
  CHECK(c.recall == std::vector<double>{0.0, 1.0});
  CHECK(c.ap == 0.5);
  CHECK(r.map == 0.5);
}

TEST_CASE("perfect predictions score a mean ap of one") {
  std::vector<GtBox> gts = {gt_of({5, 5, 2, 2, 0}, "car"), gt_of({12, 5, 4, 2, 0.4}, "car"),
                            gt_of({5, 12, 3, 1.5, -0.7}, "plane")};
  std::vector<ScoredBox> prds;
  for (const auto& g : gts) prds.push_back(prd_of(g.box, g.category, 0.5));
  EvalResult r = evaluate_ap(gts, prds);
  CHECK(r.map == 1.0);
  CHECK(!r.empty_warning);
  REQUIRE(r.categories.size() == 2);
  CHECK(r.categories[0] == "car");  // sorted
  CHECK(r.categories[1] == "plane");
}

TEST_CASE("a 0.6-iou match counts at threshold 0.5 but not 0.75") {
  // Aligned squares of side 2 shifted by 0.5: inter 3, union 5.
  std::vector<GtBox> gts = {gt_of({0, 0, 2, 2, 0}, "car")};
  std::vector<ScoredBox> prds = {prd_of({0.5, 0, 2, 2, 0}, "car", 0.9)};
  EvalResult r = evaluate_ap(gts, prds, {0.5, 0.75});
  CHECK(r.curves[0][0].ap == 1.0);
  CHECK(r.curves[0][1].ap == 0.0);
  CHECK(r.map == 0.5);
}

TEST_CASE("each ground truth matches at most one prediction") {
  std::vector<GtBox> gts = {gt_of({5, 5, 2, 2, 0}, "car")};
  std::vector<ScoredBox> prds = {prd_of({5, 5, 2, 2, 0}, "car", 0.9),
                                 prd_of({5, 5, 2, 2, 0}, "car", 0.8)};
  EvalResult r = evaluate_ap(gts, prds, {0.5});
  // Second duplicate is a false positive but the envelope keeps ap at 1.
  CHECK(r.curves[0][0].precision == std::vector<double>{1.0, 0.5});
  CHECK(r.curves[0][0].ap == 1.0);
}

TEST_CASE("score ties keep input order") {
  std::vector<GtBox> gts = {gt_of({0, 0, 2, 2, 0}, "car")};
  ScoredBox exact = prd_of({0, 0, 2, 2, 0}, "car", 0.5);
  ScoredBox loose = prd_of({0.5, 0, 2, 2, 0}, "car", 0.5);  // iou 0.6
  EvalResult hit_first = evaluate_ap(gts, {exact, loose}, {0.75});
  EvalResult miss_first = evaluate_ap(gts, {loose, exact}, {0.75});
  CHECK(hit_first.map == 1.0);
  CHECK(miss_first.map == 0.5);
}

TEST_CASE("mean ap averages categories; gt-less categories are ignored") {
  std::vector<GtBox> gts = {gt_of({5, 5, 2, 2, 0}, "a"), gt_of({15, 5, 2, 2, 0}, "b")};
  std::vector<ScoredBox> prds = {
      prd_of({5, 5, 2, 2, 0}, "a", 0.9),    // perfect: ap 1
      prd_of({40, 40, 2, 2, 0}, "b", 0.9),  // miss ranked first
      prd_of({15, 5, 2, 2, 0}, "b", 0.1),   // hit second: ap 0.5
      prd_of({5, 5, 2, 2, 0}, "ghost", 0.99)};
  EvalResult r = evaluate_ap(gts, prds, {0.5});
  REQUIRE(r.categories.size() == 2);
  CHECK(r.map == 0.75);
}

TEST_CASE("empty inputs warn and score zero") {
  EvalResult no_gts = evaluate_ap({}, {prd_of({0, 0, 2, 2, 0}, "car", 0.5)});
  CHECK(no_gts.empty_warning);
  CHECK(no_gts.map == 0.0);
  CHECK(no_gts.categories.empty());

  EvalResult no_prds = evaluate_ap({gt_of({0, 0, 2, 2, 0}, "car")}, {});
  CHECK(no_prds.empty_warning);
  CHECK(no_prds.map == 0.0);
  CHECK(no_prds.categories.size() == 1);
}

TEST_CASE("metric matrix matches direct evaluation cell for cell") {
  std::vector<RotatedBox<double>> gts = {{4, 4, 3, 2, 0.3}, {6, 5, 2, 2, -0.5}};
  std::vector<RotatedBox<double>> prds = {{4.5, 4, 3, 2, 0.35}, {9, 9, 1, 1, 0}, {6, 5, 2, 2, 0.1}};
  LossFn fn;
  fn.kind = LossKind::Fpdiou;
  fn.dims = {10.0, 10.0};
  MetricMatrix m = metric_matrix(gts, prds, fn);
  REQUIRE(m.rows == 2);
  REQUIRE(m.cols == 3);
  for (size_t r = 0; r < m.rows; ++r)
    for (size_t c = 0; c < m.cols; ++c) CHECK(m.at(r, c) == fn.metric(gts[r], prds[c]));
  MetricMatrix s = metric_matrix_serial(gts, prds, fn);
  CHECK(m.cells == s.cells);

  CHECK_THROWS_AS(metric_matrix({}, prds, fn), std::invalid_argument);
  CHECK_THROWS_AS(metric_matrix(gts, {}, fn), std::invalid_argument);
}

TEST_CASE("simulation traces are deterministic and driver-independent") {
  SimConfig cfg;
  cfg.n_trials = 4;
  cfg.max_iters = 30;
  cfg.offset_min = 2.0;
  cfg.offset_max = 3.0;
  cfg.lr = 0.3;
  cfg.stop_tol = 0.0;
  cfg.seed = 5;
  SimTrace a = simulate_regression(cfg);
  SimTrace b = simulate_regression(cfg);
  SimTrace c = simulate_regression_serial(cfg);
  CHECK(same_trace(a, b));
  CHECK(same_trace(a, c));
  REQUIRE(a.trials.size() == 4);
  for (const auto& t : a.trials) CHECK(t.size() == 30);

  SimConfig none = cfg;
  none.n_trials = 0;
  SimTrace empty = simulate_regression(none);
  CHECK(empty.trials.empty());
  SimSummary s = summarize(empty);
  CHECK(s.median_iters_to_target == -1.0);
  CHECK(s.trials_reached == 0);
}

TEST_CASE("stop tolerance ends trials early without changing their prefix") {
  SimConfig cfg;
  cfg.n_trials = 5;
  cfg.max_iters = 200;
  cfg.offset_min = 2.0;
  cfg.offset_max = 3.0;
  cfg.lr = 0.3;
  cfg.stop_tol = 0.05;
  cfg.seed = 3;
  SimTrace stopped = simulate_regression(cfg);
  SimConfig full_cfg = cfg;
  full_cfg.stop_tol = 0.0;
  SimTrace full = simulate_regression(full_cfg);
  for (size_t t = 0; t < 5; ++t) {
    CHECK(stopped.trials[t].size() < 200);
    CHECK(full.trials[t].size() == 200);
    CHECK(stopped.trials[t].back().loss < 0.05);
    // The stopped trace is a prefix of the unstopped one.
    for (size_t i = 0; i < stopped.trials[t].size(); ++i)
      CHECK(stopped.trials[t][i].loss == full.trials[t][i].loss);
  }
}

TEST_CASE("small steps descend the loss monotonically") {
  SimConfig cfg;
  cfg.n_trials = 20;
  cfg.max_iters = 80;
  cfg.lr = 0.05;
  cfg.stop_tol = 0.0;
  cfg.seed = 2;
  SimTrace tr = simulate_regression(cfg);
  long total = 0, ok = 0;
  for (const auto& t : tr.trials)
    for (size_t i = 1; i < t.size(); ++i) {
      ++total;
      if (t[i].loss <= t[i - 1].loss + 1e-12) ++ok;
    }
  CHECK(double(ok) / double(total) >= 0.99);
}

TEST_CASE("iters_to_reach finds the first crossing, one-based") {
  std::vector<IterRecord> trial = {{0.9, 0.3, 1.0}, {0.4, 0.71, 0.5}, {0.2, 0.9, 0.2}};
  CHECK(iters_to_reach(trial, 0.7) == 2);
  CHECK(iters_to_reach(trial, 0.95) == -1);
  CHECK(iters_to_reach({}, 0.7) == -1);
}

TEST_CASE("summarize digests finals, reach times, and jitters") {
  SimTrace tr;
  tr.trials = {
      {{0.5, 0.1, 1.0}, {0.2, 0.75, 0.4}},
      {{0.6, 0.2, 1.2}, {0.5, 0.3, 1.0}, {0.3, 0.5, 0.7}, {0.1, 0.8, 0.3}},
      {{0.7, 0.1, 1.4}, {0.6, 0.2, 1.2}},
  };
  tr.jitter_counts = {1, 0, 2};
  SimSummary s = summarize(tr, 0.7);
  CHECK(s.trials_reached == 2);
  // Reach times {2, 4, inf}: the median is the middle finite value.
  CHECK(s.median_iters_to_target == 4.0);
  CHECK(s.median_final_riou == 0.75);
  CHECK(s.p10_final_riou == doctest::Approx(0.31).epsilon(1e-12));
  CHECK(s.p90_final_riou == doctest::Approx(0.79).epsilon(1e-12));
  CHECK(s.total_jitters == 3);
}

TEST_CASE("config bounds are validated before simulating") {
  auto broken = [](auto&& mutate) {
    SimConfig c;
    mutate(c);
    return c;
  };
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.lr = 0.0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.max_iters = 0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.offset_min = 9.0; }).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.scale_min = 0.0; c.scale_max = 0.0; }).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.aspect_min = -1.0; }).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.angle_min = 2.0; }).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(broken([](SimConfig& c) { c.image_dims.w = 0.0; }).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_regression(broken([](SimConfig& c) { c.lr = -1.0; })),
                  std::invalid_argument);
}

TEST_CASE("identical runs serialize to identical bytes") {
  SimConfig cfg;
  cfg.n_trials = 3;
  cfg.max_iters = 25;
  cfg.offset_min = 2.0;
  cfg.offset_max = 3.0;
  cfg.lr = 0.3;
  cfg.seed = 9;
  std::ostringstream a, b;
  write_trace_csv(simulate_regression(cfg), a);
  write_trace_csv(simulate_regression(cfg), b);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("trial,iter,loss,riou,corner_rms\n", 0) == 0);
}

}  // TEST_SUITE
