// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "rotbox/losses.hpp"

namespace rotbox {

// Row-major |gts| x |prds| matrix of metric values.
struct MetricMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> cells;
  double at(std::size_t r, std::size_t c) const { return cells[r * cols + c]; }
};

// Pairwise metric values under fn.metric; cell order matches input order.
// Cells are independent; the parallel driver writes them by index, so the
// result is identical to the serial reference.
MetricMatrix metric_matrix(const std::vector<RotatedBox<double>>& gts,
                           const std::vector<RotatedBox<double>>& prds, const LossFn& fn);

MetricMatrix metric_matrix_serial(const std::vector<RotatedBox<double>>& gts,
                                  const std::vector<RotatedBox<double>>& prds, const LossFn& fn);

}  // namespace rotbox
