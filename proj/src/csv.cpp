// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#include "rotbox/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <system_error>

namespace rotbox {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, ptr);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_trace_csv(const SimTrace& trace, std::ostream& out) {
  out << "trial,iter,loss,riou,corner_rms\n";
  for (size_t t = 0; t < trace.trials.size(); ++t) {
    const auto& recs = trace.trials[t];
    for (size_t i = 0; i < recs.size(); ++i) {
      out << t << ',' << i + 1 << ',' << format_double(recs[i].loss) << ','
          << format_double(recs[i].riou) << ',' << format_double(recs[i].corner_rms) << '\n';
    }
  }
}

void write_eval_csv(const EvalResult& r, std::ostream& out) {
  out << "category,threshold,ap\n";
  for (size_t c = 0; c < r.categories.size(); ++c)
    for (size_t t = 0; t < r.thresholds.size(); ++t)
      out << csv_escape(r.categories[c]) << ',' << format_double(r.thresholds[t]) << ','
          << format_double(r.curves[c][t].ap) << '\n';
  for (size_t t = 0; t < r.thresholds.size(); ++t)
    out << "ALL," << format_double(r.thresholds[t]) << ','
        << format_double(r.map_per_threshold[t]) << '\n';
  out << "ALL,mean," << format_double(r.map) << '\n';
}

void write_matrix_csv(const MetricMatrix& m, std::ostream& out) {
  out << "gt,prd,value\n";
  for (size_t r = 0; r < m.rows; ++r)
    for (size_t c = 0; c < m.cols; ++c)
      out << r << ',' << c << ',' << format_double(m.at(r, c)) << '\n';
}

void write_values_csv(const std::vector<double>& values, std::ostream& out) {
  out << "index,value\n";
  for (size_t i = 0; i < values.size(); ++i)
    out << i << ',' << format_double(values[i]) << '\n';
}

namespace {

template <class Fn>
void emit(const std::string& path, Fn&& write) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  write(f);
  f.flush();
  if (!f) throw IoError("write failed: " + path);
}

}  // namespace

void emit_trace_csv(const SimTrace& trace, const std::string& path) {
  emit(path, [&](std::ostream& o) { write_trace_csv(trace, o); });
}

void emit_eval_csv(const EvalResult& r, const std::string& path) {
  emit(path, [&](std::ostream& o) { write_eval_csv(r, o); });
}

void emit_matrix_csv(const MetricMatrix& m, const std::string& path) {
  emit(path, [&](std::ostream& o) { write_matrix_csv(m, o); });
}

void emit_values_csv(const std::vector<double>& values, const std::string& path) {
  emit(path, [&](std::ostream& o) { write_values_csv(values, o); });
}

}  // namespace rotbox
