// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "adascale/maps.hpp"

namespace adascale {

struct LossWeights {
  double w_c = 0.5;
  double w_s = 0.5;
  double w_scale = 0.1;
  double ohnm_ratio = 3.0;
};

/// Throws ConfigError when any weight is negative.
void validate(const LossWeights& w);

/// 1 - 2 sum(S G) / (sum S^2 + sum G^2), summed where `mask` is 1 (or
/// everywhere without a mask). Both sums empty counts as perfect agreement.
double dice_loss(const FloatMap& pred, const FloatMap& gt, const FloatMap* mask = nullptr);

/// Keeps every positive of `gt` plus the ceil(ratio * positives) negatives
/// with highest predicted confidence; with no positives, the 1000 most
/// confident negatives. Ties go to the lower row-major index.
FloatMap ohnm_mask(const FloatMap& pred, const FloatMap& gt, double ratio);

inline constexpr int kOhnmEmptyPositivesKeep = 1000;

/// w_c * dice(seg, OHNM mask) + w_s * dice(shrunk, masked by gt seg).
double segment_loss(const LabelMaps& pred, const LabelMaps& gt, const LossWeights& w = {});

double smooth_l1(double x);

/// Mean smooth-L1 of (pred - gt) over pixels where text_mask is 1; 0 for an
/// empty mask.
double scale_loss(const FloatMap& pred_scale, const FloatMap& gt_scale, const FloatMap& text_mask);

struct LossBreakdown {
  double segment = 0.0;
  double scale = 0.0;
  double total = 0.0;
};

LossBreakdown total_loss(const LabelMaps& pred, const LabelMaps& gt, const LossWeights& w = {});

}  // namespace adascale
