// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "rotbox/simulate.hpp"

namespace rotbox {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Flat key=value overlay onto a SimConfig. '#' starts a comment; blank
// lines are skipped; unknown keys and malformed values are errors.
//
// Keys: n_trials, loss, lr, max_iters, offset_min, offset_max, scale_min,
// scale_max, aspect_min, aspect_max, angle_min, angle_max, image_w,
// image_h, seed, stop_tol, piou_k, piou_step, piou_pad, gwd_tau, gwd_f.
void apply_config(std::istream& in, SimConfig& cfg);
void apply_config_file(const std::string& path, SimConfig& cfg);

}  // namespace rotbox
