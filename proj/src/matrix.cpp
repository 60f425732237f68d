// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#include "rotbox/matrix.hpp"

#include <stdexcept>

#include "rotbox/parallel.hpp"

namespace rotbox {

namespace {

template <bool Parallel>
MetricMatrix matrix_impl(const std::vector<RotatedBox<double>>& gts,
                         const std::vector<RotatedBox<double>>& prds, const LossFn& fn) {
  if (gts.empty() || prds.empty()) throw std::invalid_argument("metric_matrix needs non-empty inputs");
  MetricMatrix m;
  m.rows = gts.size();
  m.cols = prds.size();
  m.cells.assign(m.rows * m.cols, 0.0);
  const long total = static_cast<long>(m.rows * m.cols);
#ifdef _OPENMP
#pragma omp parallel for num_threads(worker_count()) schedule(static) if (Parallel)
#endif
  for (long idx = 0; idx < total; ++idx) {
    std::size_t r = static_cast<std::size_t>(idx) / m.cols;
    std::size_t c = static_cast<std::size_t>(idx) % m.cols;
    m.cells[static_cast<std::size_t>(idx)] = fn.metric(gts[r], prds[c]);
  }
  return m;
}

}  // namespace

MetricMatrix metric_matrix(const std::vector<RotatedBox<double>>& gts,
                           const std::vector<RotatedBox<double>>& prds, const LossFn& fn) {
  return matrix_impl<true>(gts, prds, fn);
}

MetricMatrix metric_matrix_serial(const std::vector<RotatedBox<double>>& gts,
                                  const std::vector<RotatedBox<double>>& prds, const LossFn& fn) {
  return matrix_impl<false>(gts, prds, fn);
}

}  // namespace rotbox
