// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "adascale/maps.hpp"
#include "adascale/scene.hpp"

namespace adascale {

/// Degradation model of the synthetic detector.
struct OracleConfig {
  /// Gaussian sigma = blur_coeff * downscale_factor, in input pixels.
  double blur_coeff = 0.5;
  /// Words rendered shorter than this (input pixels) are not detected.
  double min_detectable_height = 4.0;
  double noise_amp = 0.05;
  double scale_noise_amp = 0.05;
  std::uint64_t seed = 0;
};

void validate(const OracleConfig& cfg);

/// Prediction maps for one forward pass.
struct OracleOutput {
  LabelMaps maps;
  int input_width = 0;
  int input_height = 0;
  /// Original long side over input long side.
  double downscale_factor = 1.0;
  /// Ids of the words present in the prediction (synthetic oracle only).
  std::vector<int> kept_word_ids;
};

/// A single-scale detection network: maps a scene rendered at `long_side`
/// to segmentation, shrunk and scale predictions.
class SegmentationOracle {
 public:
  virtual ~SegmentationOracle() = default;
  virtual OracleOutput infer(const SceneSpec& scene, int long_side) const = 0;
};

/// Rasterizes the labels, drops words below the detectable height, blurs
/// both confidence channels, and adds counter-based noise keyed by
/// (seed, channel, x, y).
OracleOutput synth_infer(const SceneSpec& scene, int long_side, const OracleConfig& cfg,
                         const ScaleParams& scale = {}, const ShrinkParams& shrink = {});

class SynthOracle final : public SegmentationOracle {
 public:
  explicit SynthOracle(OracleConfig cfg, ScaleParams scale = {}, ShrinkParams shrink = {});
  OracleOutput infer(const SceneSpec& scene, int long_side) const override;
  const OracleConfig& config() const { return cfg_; }

 private:
  OracleConfig cfg_;
  ScaleParams scale_;
  ShrinkParams shrink_;
};

/// Wraps externally produced maps. The text mask is taken as seg >= 0.5.
/// Throws InputError for unreadable files or non-finite values and
/// ShapeError when the three maps differ in dims.
OracleOutput file_infer(const std::filesystem::path& seg_path, const std::filesystem::path& shrunk_path,
                        const std::filesystem::path& scale_path, double downscale_factor);

/// Replays one fixed set of maps; infer() checks that the requested input
/// dims match them. Only usable for a single pass.
class FileOracle final : public SegmentationOracle {
 public:
  explicit FileOracle(OracleOutput output) : output_(std::move(output)) {}
  OracleOutput infer(const SceneSpec& scene, int long_side) const override;

 private:
  OracleOutput output_;
};

}  // namespace adascale
