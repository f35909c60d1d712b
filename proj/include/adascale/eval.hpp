// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "adascale/geometry.hpp"
#include "adascale/pipeline.hpp"

namespace adascale {

struct Match {
  int det_id = 0;
  int gt_id = 0;
  double iou = 0.0;
  friend bool operator==(const Match&, const Match&) = default;
};

/// One-to-one greedy matching: every det x gt pair with IoU >= iou_thresh,
/// accepted in decreasing IoU order (ties by gt_id, then det_id), skipping
/// items already matched. Ids are positions in the input lists.
std::vector<Match> match_detections(const std::vector<RotatedRect>& dets, const std::vector<RotatedRect>& gts,
                                    double iou_thresh = 0.5);
std::vector<Match> match_detections(const std::vector<Detection>& dets, const std::vector<RotatedRect>& gts,
                                    double iou_thresh = 0.5);

struct Scores {
  double recall = 0.0;
  double precision = 0.0;
  double f_score = 0.0;
};

/// Recall over gts, precision over dets, harmonic mean; empty denominators
/// give 0.
Scores score(std::size_t n_matches, std::size_t n_dets, std::size_t n_gts);

struct PixelReport {
  int scenes = 0;
  long long total_pass1 = 0;
  long long total_pass2 = 0;
  long long total_pixels = 0;
  long long total_reference = 0;
  double mean_pass1 = 0.0;
  double mean_pass2 = 0.0;
  double mean_pixels = 0.0;
  /// total_reference / total_pixels (0 when nothing was processed).
  double reduction_ratio = 0.0;
  std::vector<double> per_scene_ratio;
};

/// Pixel budget of a batch versus processing every scene once at
/// `reference_long_side`.
PixelReport pixel_report(const std::vector<PipelineStats>& stats, int reference_long_side);

struct SceneEval {
  int scene_index = 0;
  std::size_t n_dets = 0;
  std::size_t n_gts = 0;
  std::vector<Match> matches;
  Scores scores;
};

struct EvalReport {
  Scores scores;
  std::vector<Match> matches;
  PixelReport pixels;
  std::vector<SceneEval> per_scene;
};

/// Ground-truth boxes of a scene, in word order.
std::vector<RotatedRect> ground_truth(const SceneSpec& scene);

SceneEval evaluate_scene(const std::vector<Detection>& dets, const SceneSpec& scene, double iou_thresh = 0.5);

/// Aggregates per-scene evaluations (matches are pooled, then scored).
EvalReport aggregate(std::vector<SceneEval> scenes, const std::vector<PipelineStats>& stats, int reference_long_side);

}  // namespace adascale
