// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotbox/geom.hpp"

namespace rotbox {

// One annotation line: "x1 y1 x2 y2 x3 y3 x4 y4 category difficulty".
// The quad is stored in canonical sorted order.
struct Annotation {
  CornerQuad<double> quad;
  std::string category;
  int difficulty = 0;
};

// Prediction line: annotation fields plus a trailing confidence score.
struct Prediction {
  Annotation ann;
  double score = 0.0;
};

struct ParseError : std::runtime_error {
  int line, column;
  ParseError(int line_, int column_, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_) + ", token " + std::to_string(column_) +
                           ": " + what),
        line(line_),
        column(column_) {}
};

struct GeometryError : std::runtime_error {
  int line;
  GeometryError(int line_, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

// Parses annotation lines; imagesource:/gsd: headers and blank lines are
// skipped. Throws ParseError for arity or numeric failures (with line and
// token position) and GeometryError for self-intersecting or degenerate
// quads.
std::vector<Annotation> parse_dota(std::istream& in);

// Same schema with the trailing score column.
std::vector<Prediction> parse_dota_predictions(std::istream& in);

// Rectangle interpretation of an annotation; NotARectangle propagates.
RotatedBox<double> annotation_to_box(const Annotation& a);

}  // namespace rotbox
