// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#include "rotbox/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace rotbox {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double num_value(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
  return out;
}

std::uint64_t uint_value(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" + v + "'");
  return out;
}

GwdTransform gwd_f_value(const std::string& v) {
  if (v == "identity") return GwdTransform::Identity;
  if (v == "sqrt") return GwdTransform::Sqrt;
  if (v == "log1p") return GwdTransform::Log1p;
  throw ConfigError("config key 'gwd_f': expected identity|sqrt|log1p, got '" + v + "'");
}

}  // namespace

void apply_config(std::istream& in, SimConfig& cfg) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");

    if (key == "n_trials") cfg.n_trials = uint_value(key, val);
    else if (key == "loss") {
      try {
        cfg.loss = loss_kind_from(val);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config key 'loss': ") + e.what());
      }
    }
    else if (key == "lr") cfg.lr = num_value(key, val);
    else if (key == "max_iters") cfg.max_iters = int(uint_value(key, val));
    else if (key == "offset_min") cfg.offset_min = num_value(key, val);
    else if (key == "offset_max") cfg.offset_max = num_value(key, val);
    else if (key == "scale_min") cfg.scale_min = num_value(key, val);
    else if (key == "scale_max") cfg.scale_max = num_value(key, val);
    else if (key == "aspect_min") cfg.aspect_min = num_value(key, val);
    else if (key == "aspect_max") cfg.aspect_max = num_value(key, val);
    else if (key == "angle_min") cfg.angle_min = num_value(key, val);
    else if (key == "angle_max") cfg.angle_max = num_value(key, val);
    else if (key == "image_w") cfg.image_dims.w = num_value(key, val);
    else if (key == "image_h") cfg.image_dims.h = num_value(key, val);
    else if (key == "seed") cfg.seed = uint_value(key, val);
    else if (key == "stop_tol") cfg.stop_tol = num_value(key, val);
    else if (key == "piou_k") cfg.piou_cfg.k = num_value(key, val);
    else if (key == "piou_step") cfg.piou_cfg.grid_step = num_value(key, val);
    else if (key == "piou_pad") cfg.piou_cfg.pad = num_value(key, val);
    else if (key == "gwd_tau") cfg.gwd_cfg.tau = num_value(key, val);
    else if (key == "gwd_f") cfg.gwd_cfg.f = gwd_f_value(val);
    else throw ConfigError("unknown config key '" + key + "'");
  }
}

void apply_config_file(const std::string& path, SimConfig& cfg) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  apply_config(f, cfg);
}

}  // namespace rotbox
