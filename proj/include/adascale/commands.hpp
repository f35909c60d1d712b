// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "adascale/scene.hpp"
#include "adascale/serialize.hpp"

namespace adascale {

namespace fs = std::filesystem;

/// Generates a scene and writes it to `out` (scene JSON).
SceneSpec cmd_synth(const SynthParams& params, const fs::path& out);
SceneSpec cmd_synth_pairs(const PairSceneParams& params, const fs::path& out);

enum class RunMode { single, adaptive };

RunMode parse_mode(const std::string& mode);

struct RunArgs {
  fs::path scene;
  std::optional<fs::path> config;
  RunMode mode = RunMode::adaptive;
  /// Overrides the oracle seed from the config.
  std::optional<std::uint64_t> seed;
  /// Long side of a single-mode pass; defaults to first_pass_long_side.
  std::optional<int> long_side;
  fs::path out_dir = ".";
  bool render = false;
  /// Directory with seg.pfm, shrunk.pfm and scale.pfm replacing the
  /// synthetic detector (single mode only).
  std::optional<fs::path> maps_dir;
};

/// Writes detections.json and stats.json (plus overlay.ppm with `render`)
/// into out_dir.
RunResult cmd_run(const RunArgs& args);

struct EvalArgs {
  fs::path detections;
  fs::path scene;
  std::optional<fs::path> stats;
  std::optional<fs::path> csv;
  std::string method = "run";
  double iou_thresh = 0.5;
  int reference_long_side = 1440;
  fs::path out;
};

/// Writes the report JSON and, when requested, appends a CSV row (with a
/// header for a new file). Duplicate detection ids are an input error.
EvalReport cmd_eval(const EvalArgs& args);

/// Items JSON in, layout JSON out.
std::vector<KnapsackLayout> cmd_pack(const fs::path& items, int gutter, int max_bin_side, const fs::path& out);

/// Loss of the maps in `pred_dir` (seg, shrunk, scale) against `gt_dir`
/// (seg, shrunk, scale, mask).
LossBreakdown cmd_loss(const fs::path& pred_dir, const fs::path& gt_dir, const fs::path& out);

/// Writes seg.pfm, shrunk.pfm, scale.pfm and mask.pfm for a scene at
/// `long_side`: ground-truth labels, or the synthetic detector's output
/// when `predict` is set.
void cmd_labels(const fs::path& scene, const std::optional<fs::path>& config, int long_side, bool predict,
                const fs::path& out_dir);

}  // namespace adascale
