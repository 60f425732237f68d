// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#include "rotbox/dota.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <sstream>

namespace rotbox {

namespace {

bool is_header(const std::string& line) {
  return line.rfind("imagesource", 0) == 0 || line.rfind("gsd", 0) == 0;
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> toks;
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

double parse_num(const std::string& tok, int line, int col) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line, col, "expected a number, got '" + tok + "'");
  if (!std::isfinite(v)) throw ParseError(line, col, "non-finite coordinate");
  return v;
}

int parse_int(const std::string& tok, int line, int col) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line, col, "expected an integer, got '" + tok + "'");
  return v;
}

bool segments_cross(const Vec2<double>& a, const Vec2<double>& b, const Vec2<double>& c,
                    const Vec2<double>& d) {
  auto side = [](const Vec2<double>& p, const Vec2<double>& q, const Vec2<double>& r) {
    return cross(q - p, r - p);
  };
  double d1 = side(a, b, c), d2 = side(a, b, d);
  double d3 = side(c, d, a), d4 = side(c, d, b);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

// The raw ring order from the file decides self-intersection; the stored
// quad is re-sorted canonically afterwards.
Annotation annotation_from(const std::vector<std::string>& toks, int line) {
  std::array<Vec2<double>, 4> ring;
  for (int i = 0; i < 4; ++i) {
    ring[i].x = parse_num(toks[size_t(2 * i)], line, 2 * i + 1);
    ring[i].y = parse_num(toks[size_t(2 * i + 1)], line, 2 * i + 2);
  }
  if (segments_cross(ring[0], ring[1], ring[2], ring[3]) ||
      segments_cross(ring[1], ring[2], ring[3], ring[0]))
    throw GeometryError(line, "self-intersecting quad");
  double scale = 1.0;
  for (const auto& p : ring) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  if (std::abs(ring_area(std::span<const Vec2<double>>(ring))) <= kEpsGeom * scale * scale)
    throw GeometryError(line, "degenerate quad");
  Annotation a;
  a.quad = sort_corners(ring);
  a.category = toks[8];
  a.difficulty = parse_int(toks[9], line, 10);
  return a;
}

template <class Row>
std::vector<Row> parse_stream(std::istream& in, size_t arity,
                              Row (*make)(const std::vector<std::string>&, int)) {
  std::vector<Row> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto toks = tokens_of(line);
    if (toks.empty()) continue;
    if (is_header(toks[0])) continue;
    if (toks.size() != arity)
      throw ParseError(lineno, int(toks.size()),
                       "expected " + std::to_string(arity) + " fields, got " +
                           std::to_string(toks.size()));
    rows.push_back(make(toks, lineno));
  }
  return rows;
}

}  // namespace

std::vector<Annotation> parse_dota(std::istream& in) {
  return parse_stream<Annotation>(in, 10, [](const std::vector<std::string>& toks, int line) {
    return annotation_from(toks, line);
  });
}

std::vector<Prediction> parse_dota_predictions(std::istream& in) {
  return parse_stream<Prediction>(in, 11, [](const std::vector<std::string>& toks, int line) {
    Prediction p;
    p.ann = annotation_from(toks, line);
    p.score = parse_num(toks[10], line, 11);
    return p;
  });
}

RotatedBox<double> annotation_to_box(const Annotation& a) { return box_from_corners(a.quad); }

}  // namespace rotbox
