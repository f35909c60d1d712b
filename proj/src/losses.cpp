// SPDX-License-Identifier: Apache-2.0
#include "adascale/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "adascale/error.hpp"

namespace adascale {

void validate(const LossWeights& w) {
  if (!(w.w_c >= 0) || !(w.w_s >= 0) || !(w.w_scale >= 0) || !(w.ohnm_ratio >= 0)) {
    throw ConfigError("loss weights must be non-negative");
  }
}

double dice_loss(const FloatMap& pred, const FloatMap& gt, const FloatMap* mask) {
  require_same_shape(pred, gt, "dice_loss");
  if (mask) require_same_shape(pred, *mask, "dice_loss mask");
  const auto s = pred.data();
  const auto g = gt.data();
  double inter = 0.0, ss = 0.0, gg = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (mask && mask->data()[i] < 0.5) continue;
    inter += s[i] * g[i];
    ss += s[i] * s[i];
    gg += g[i] * g[i];
  }
  const double denom = ss + gg;
  if (denom == 0.0) return 0.0;
  return 1.0 - 2.0 * inter / denom;
}

FloatMap ohnm_mask(const FloatMap& pred, const FloatMap& gt, double ratio) {
  require_same_shape(pred, gt, "ohnm_mask");
  if (!(ratio >= 0)) throw ConfigError("OHNM ratio must be non-negative");
  FloatMap mask(pred.width(), pred.height());
  auto m = mask.data();
  const auto s = pred.data();
  const auto g = gt.data();
  std::vector<std::size_t> negatives;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] >= 0.5) {
      m[i] = 1.0;
      ++positives;
    } else {
      negatives.push_back(i);
    }
  }
  const double want = positives == 0 ? kOhnmEmptyPositivesKeep : std::ceil(ratio * static_cast<double>(positives));
  const std::size_t keep = static_cast<std::size_t>(std::min(want, static_cast<double>(negatives.size())));
  std::partial_sort(negatives.begin(), negatives.begin() + static_cast<std::ptrdiff_t>(keep), negatives.end(),
                    [&](std::size_t a, std::size_t b) { return s[a] > s[b] || (s[a] == s[b] && a < b); });
  for (std::size_t k = 0; k < keep; ++k) m[negatives[k]] = 1.0;
  return mask;
}

double segment_loss(const LabelMaps& pred, const LabelMaps& gt, const LossWeights& w) {
  validate(w);
  pred.check_shapes();
  gt.check_shapes();
  require_same_shape(pred.seg, gt.seg, "segment_loss");
  const FloatMap hard = ohnm_mask(pred.seg, gt.seg, w.ohnm_ratio);
  const double l_c = dice_loss(pred.seg, gt.seg, &hard);
  // The shrunk channel is only supervised inside the text map.
  const double l_s = dice_loss(pred.shrunk, gt.shrunk, &gt.seg);
  return w.w_c * l_c + w.w_s * l_s;
}

double smooth_l1(double x) {
  const double a = std::abs(x);
  return a < 1.0 ? 0.5 * x * x : a - 0.5;
}

double scale_loss(const FloatMap& pred_scale, const FloatMap& gt_scale, const FloatMap& text_mask) {
  require_same_shape(pred_scale, gt_scale, "scale_loss");
  require_same_shape(pred_scale, text_mask, "scale_loss mask");
  const auto p = pred_scale.data();
  const auto g = gt_scale.data();
  const auto m = text_mask.data();
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (m[i] < 0.5) continue;
    acc += smooth_l1(p[i] - g[i]);
    ++n;
  }
  return n == 0 ? 0.0 : acc / static_cast<double>(n);
}

LossBreakdown total_loss(const LabelMaps& pred, const LabelMaps& gt, const LossWeights& w) {
  LossBreakdown out;
  out.segment = segment_loss(pred, gt, w);
  out.scale = scale_loss(pred.scale, gt.scale, gt.text_mask);
  out.total = out.segment + w.w_scale * out.scale;
  return out;
}

}  // namespace adascale
