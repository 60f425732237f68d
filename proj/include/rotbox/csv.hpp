// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "rotbox/eval.hpp"
#include "rotbox/matrix.hpp"
#include "rotbox/simulate.hpp"

namespace rotbox {

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Shortest round-trip decimal form (to_chars); integral doubles render
// without an exponent or trailing zeros, so output is stable across runs
// and platforms.
std::string format_double(double x);

// RFC-4180 field quoting; applied to every string field.
std::string csv_escape(const std::string& s);

// trace schema: trial,iter,loss,riou,corner_rms
void write_trace_csv(const SimTrace& trace, std::ostream& out);

// eval schema: category,threshold,ap  (+ per-threshold mean rows with
// category "ALL", then one "ALL,mean,<mAP>" row)
void write_eval_csv(const EvalResult& r, std::ostream& out);

// matrix schema: gt,prd,value
void write_matrix_csv(const MetricMatrix& m, std::ostream& out);

// value list schema: index,value
void write_values_csv(const std::vector<double>& values, std::ostream& out);

// File variants open path, write, and throw IoError on any failure.
void emit_trace_csv(const SimTrace& trace, const std::string& path);
void emit_eval_csv(const EvalResult& r, const std::string& path);
void emit_matrix_csv(const MetricMatrix& m, const std::string& path);
void emit_values_csv(const std::vector<double>& values, const std::string& path);

}  // namespace rotbox
