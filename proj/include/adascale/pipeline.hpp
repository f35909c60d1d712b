// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "adascale/geometry.hpp"
#include "adascale/maps.hpp"
#include "adascale/oracle.hpp"
#include "adascale/packing.hpp"
#include "adascale/scene.hpp"

namespace adascale {

struct PipelineConfig {
  /// Long side of the coarse pass (720 / 1024 / 1440 for S / M / L).
  int first_pass_long_side = 720;
  /// Canonical word height is kappa * s_ref.
  double kappa = 1.5;
  double s_ref = 25.0;
  double seg_threshold = 0.5;
  /// Region padding in units of the blob's scale estimate.
  double blob_pad_factor = 0.25;
  int min_blob_area = 4;
  int min_det_area = 10;
  int gutter = 8;
  int max_bin_side = 4096;
  double shrink_r = 0.4;
  /// Long side of the fixed-scale baseline that pixel budgets compare to.
  int reference_long_side = 1440;

  ScaleParams scale_params() const { return {s_ref}; }
  ShrinkParams shrink_params() const { return {shrink_r}; }
};

/// Throws ConfigError on out-of-range values.
void validate(const PipelineConfig& cfg);

inline constexpr double kMinResizeFactor = 1.0 / 8.0;
inline constexpr double kMaxResizeFactor = 8.0;
/// Words keeping less than this fraction of their area inside a region are
/// left out of the knapsack.
inline constexpr double kClipRetention = 0.2;

/// One crop of the original image and the resize that brings its text to
/// the canonical height.
struct RegionPlan {
  int blob_id = 0;
  /// Original-image pixels.
  IntRect source_rect;
  double scale_estimate = 0.0;
  double resize_factor = 1.0;
  int target_width = 0;
  int target_height = 0;
};

/// Affine map original -> knapsack: k = scale * o + translate.
struct RegionTransform {
  int blob_id = 0;
  int bin_index = 0;
  double scale = 1.0;
  double translate_x = 0.0;
  double translate_y = 0.0;
  /// Region content inside the bin (excludes the gutter), knapsack pixels.
  IntRect content;

  Point2 to_knapsack(Point2 p) const { return {scale * p.x + translate_x, scale * p.y + translate_y}; }
  Point2 to_original(Point2 p) const { return {(p.x - translate_x) / scale, (p.y - translate_y) / scale}; }
};

struct Detection {
  RotatedRect rect;
  double confidence = 0.0;
};

struct PipelineStats {
  long long pixels_pass1 = 0;
  long long pixels_pass2 = 0;
  /// Pixels of the scene processed once at reference_long_side.
  long long reference_pixels = 0;
  /// reference_pixels / (pixels_pass1 + pixels_pass2).
  double reduction_ratio = 0.0;
  int blob_count = 0;
  int knapsack_count = 0;
  int canvas_width = 0;
  int canvas_height = 0;
};

struct RunResult {
  std::vector<Detection> detections;
  PipelineStats stats;
};

/// Rotated rectangles from a shrunk map: threshold, 8-connected components,
/// min-area rect over the pixel squares, expansion by the shrink ratio.
/// Coordinates are in map pixels.
std::vector<Detection> extract_detections(const FloatMap& shrunk, const PipelineConfig& cfg);

/// Baseline: one pass at `long_side`, boxes straight from the shrunk map.
RunResult single_scale_run(const SceneSpec& scene, int long_side, const PipelineConfig& cfg,
                           const SegmentationOracle& oracle);

/// Blobs of the thresholded average of both segmentation channels, each
/// carrying the seg-confidence-weighted mean scale converted to original
/// image pixels.
std::vector<Blob> estimate_blob_scales(const OracleOutput& output, const PipelineConfig& cfg);

/// Padded, clamped, merged crops with their canonical resize factors.
std::vector<RegionPlan> plan_regions(const std::vector<Blob>& blobs, const OracleOutput& output,
                                     const PipelineConfig& cfg, int canvas_width, int canvas_height);

struct KnapsackSet {
  std::vector<SceneSpec> scenes;
  std::vector<RegionTransform> transforms;
  std::vector<KnapsackLayout> layouts;
};

/// Packs the planned regions and renders each bin as a scene of clipped,
/// rescaled word outlines.
KnapsackSet build_knapsacks(const SceneSpec& scene, const std::vector<RegionPlan>& plans, const PipelineConfig& cfg);

/// Maps knapsack-space detections of one bin back to original coordinates.
/// Detections whose center lies outside every region's content (in the
/// gutter or unused bin space) are dropped.
std::vector<Detection> backmap(const std::vector<Detection>& dets, const std::vector<RegionTransform>& transforms);

/// Coarse pass, region planning, knapsack packing, refined pass per
/// knapsack, back-mapping. Only refined-pass detections are returned.
RunResult run_pipeline(const SceneSpec& scene, const PipelineConfig& cfg, const SegmentationOracle& oracle);

}  // namespace adascale
