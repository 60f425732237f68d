// Copyright (c) 2026 rotbox authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "rotbox/gaussian.hpp"
#include "rotbox/iou.hpp"
#include "rotbox/piou.hpp"

namespace rotbox {

enum class LossKind {
  RotatedIou,
  Giou,
  Diou,
  Ciou,
  Eiou,
  Fpdiou,
  Piou,
  Gwd,
  Kld,
  Kfiou,
};

inline constexpr std::array<LossKind, 10> kAllLossKinds{
    LossKind::RotatedIou, LossKind::Giou, LossKind::Diou, LossKind::Ciou, LossKind::Eiou,
    LossKind::Fpdiou,     LossKind::Piou, LossKind::Gwd,  LossKind::Kld,  LossKind::Kfiou,
};

inline const char* to_string(LossKind k) {
  switch (k) {
    case LossKind::RotatedIou: return "rotated_iou";
    case LossKind::Giou: return "giou";
    case LossKind::Diou: return "diou";
    case LossKind::Ciou: return "ciou";
    case LossKind::Eiou: return "eiou";
    case LossKind::Fpdiou: return "fpdiou";
    case LossKind::Piou: return "piou";
    case LossKind::Gwd: return "gwd";
    case LossKind::Kld: return "kld";
    case LossKind::Kfiou: return "kfiou";
  }
  return "?";
}

inline LossKind loss_kind_from(const std::string& name) {
  for (LossKind k : kAllLossKinds)
    if (name == to_string(k)) return k;
  throw std::invalid_argument("unknown metric/loss name: " + name);
}

// One metric bound to its knobs, exposed both as a similarity value and as
// the regression loss the simulator descends. For every bounded metric the
// loss is 1 - metric; kld is already a divergence with minimum 0 and is
// used directly.
struct LossFn {
  LossKind kind = LossKind::Fpdiou;
  ImageDims dims{800.0, 800.0};
  PiouConfig piou_cfg{};
  GwdConfig gwd_cfg{};
  Enclosure enclosure = Enclosure::ConvexHull;
  // Frozen sampling lattice for piou differentiation: derivatives must see
  // the integration domain of the evaluation point, not one that shifts
  // with the perturbed box.
  std::optional<PiouLattice> lattice;

  template <class S>
  S metric(const RotatedBox<S>& gt, const RotatedBox<S>& prd) const {
    switch (kind) {
      case LossKind::RotatedIou: return rotated_iou(gt, prd);
      case LossKind::Giou: return giou(gt, prd, enclosure);
      case LossKind::Diou: return diou(gt, prd);
      case LossKind::Ciou: return ciou(gt, prd);
      case LossKind::Eiou: return eiou(gt, prd);
      case LossKind::Fpdiou: return fpdiou(gt, prd, dims);
      case LossKind::Piou:
        return lattice ? piou_on_lattice(gt, prd, piou_cfg, *lattice)
                       : piou(gt, prd, piou_cfg);
      case LossKind::Gwd: return gwd(gt, prd, gwd_cfg);
      case LossKind::Kld: return kld(prd, gt);
      case LossKind::Kfiou: return kfiou(gt, prd);
    }
    throw std::logic_error("unreachable loss kind");
  }

  template <class S>
  S operator()(const RotatedBox<S>& gt, const RotatedBox<S>& prd) const {
    if (kind == LossKind::Kld) return metric(gt, prd);
    return loss_of(metric(gt, prd));
  }

  // Copy with the piou lattice pinned at this pair's values; no-op for
  // other kinds.
  LossFn frozen_at(const RotatedBox<double>& gt, const RotatedBox<double>& prd) const {
    LossFn f = *this;
    if (kind == LossKind::Piou) f.lattice = make_lattice(gt, prd, piou_cfg);
    return f;
  }
};

}  // namespace rotbox
