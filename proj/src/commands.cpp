// SPDX-License-Identifier: Apache-2.0
#include "adascale/commands.hpp"

#include <algorithm>
#include <set>

#include "adascale/error.hpp"
#include "adascale/pfm.hpp"
#include "adascale/render.hpp"

namespace adascale {

namespace {

RunConfig load_config(const std::optional<fs::path>& path) {
  if (!path) return {};
  return config_from_json(load_document(*path), path->string());
}

SceneSpec load_scene(const fs::path& path) { return scene_from_json(load_document(path), path.string()); }

LabelMaps read_maps(const fs::path& dir, bool with_mask) {
  LabelMaps m;
  m.seg = read_pfm(dir / "seg.pfm");
  m.shrunk = read_pfm(dir / "shrunk.pfm");
  m.scale = read_pfm(dir / "scale.pfm");
  m.text_mask = with_mask ? read_pfm(dir / "mask.pfm") : binarize(m.seg, 0.5);
  m.check_shapes();
  return m;
}

void write_maps(const fs::path& dir, const LabelMaps& m) {
  fs::create_directories(dir);
  write_pfm(dir / "seg.pfm", m.seg);
  write_pfm(dir / "shrunk.pfm", m.shrunk);
  write_pfm(dir / "scale.pfm", m.scale);
  write_pfm(dir / "mask.pfm", m.text_mask);
}

}  // namespace

SceneSpec cmd_synth(const SynthParams& params, const fs::path& out) {
  SceneSpec scene = generate_scene(params);
  write_text(out, dump(scene_to_json(scene)));
  return scene;
}

SceneSpec cmd_synth_pairs(const PairSceneParams& params, const fs::path& out) {
  SceneSpec scene = generate_pair_scene(params);
  write_text(out, dump(scene_to_json(scene)));
  return scene;
}

RunMode parse_mode(const std::string& mode) {
  if (mode == "single") return RunMode::single;
  if (mode == "adaptive") return RunMode::adaptive;
  throw ConfigError("mode: expected single or adaptive, got " + mode);
}

RunResult cmd_run(const RunArgs& args) {
  const SceneSpec scene = load_scene(args.scene);
  RunConfig cfg = load_config(args.config);
  if (args.seed) cfg.oracle.seed = *args.seed;
  const PipelineConfig& pc = cfg.pipeline;
  RunResult result;
  if (args.maps_dir) {
    if (args.mode != RunMode::single) throw ConfigError("maps-dir: only supported with mode single");
    const LabelMaps maps = read_maps(*args.maps_dir, false);
    const double downscale =
        static_cast<double>(scene.long_side()) / std::max(maps.seg.width(), maps.seg.height());
    FileOracle oracle(file_infer(*args.maps_dir / "seg.pfm", *args.maps_dir / "shrunk.pfm",
                                 *args.maps_dir / "scale.pfm", downscale));
    result = single_scale_run(scene, std::max(maps.seg.width(), maps.seg.height()), pc, oracle);
  } else {
    SynthOracle oracle(cfg.oracle, pc.scale_params(), pc.shrink_params());
    if (args.mode == RunMode::single) {
      const int long_side = args.long_side.value_or(pc.first_pass_long_side);
      if (long_side < 32) throw ConfigError("long-side: must be >= 32");
      result = single_scale_run(scene, long_side, pc, oracle);
    } else {
      result = run_pipeline(scene, pc, oracle);
    }
  }
  fs::create_directories(args.out_dir);
  write_text(args.out_dir / "detections.json", dump(detections_to_json(result.detections)));
  write_text(args.out_dir / "stats.json", dump(stats_to_json(result.stats)));
  if (args.render) write_text(args.out_dir / "overlay.ppm", render_overlay(scene, result.detections));
  return result;
}

EvalReport cmd_eval(const EvalArgs& args) {
  const SceneSpec scene = load_scene(args.scene);
  std::vector<int> det_ids;
  const auto dets = detections_from_json(load_document(args.detections), args.detections.string(), &det_ids);
  std::set<int> seen;
  for (int id : det_ids)
    if (!seen.insert(id).second)
      throw InputError(args.detections.string() + ": duplicate detection id " + std::to_string(id));
  std::vector<int> gt_ids;
  for (const Word& w : scene.words) gt_ids.push_back(w.id);
  std::vector<PipelineStats> stats;
  if (args.stats) stats.push_back(stats_from_json(load_document(*args.stats), args.stats->string()));
  std::vector<SceneEval> scenes{evaluate_scene(dets, scene, args.iou_thresh)};
  const EvalReport report = aggregate(std::move(scenes), stats, args.reference_long_side);
  write_text(args.out, dump(report_to_json(report, det_ids, gt_ids)));
  if (args.csv) {
    if (fs::exists(*args.csv) && fs::file_size(*args.csv) > 0)
      append_text(*args.csv, report_csv_row(args.method, report));
    else
      write_text(*args.csv, report_csv(args.method, report));
  }
  return report;
}

std::vector<KnapsackLayout> cmd_pack(const fs::path& items, int gutter, int max_bin_side, const fs::path& out) {
  if (gutter < 0) throw ConfigError("gutter: must be >= 0");
  if (max_bin_side <= 0) throw ConfigError("max-bin-side: must be positive");
  const auto parsed = items_from_json(load_document(items), items.string());
  auto layouts = pack_all(parsed, gutter, max_bin_side);
  write_text(out, dump(layouts_to_json(layouts, gutter)));
  return layouts;
}

LossBreakdown cmd_loss(const fs::path& pred_dir, const fs::path& gt_dir, const fs::path& out) {
  const LabelMaps pred = read_maps(pred_dir, false);
  const LabelMaps gt = read_maps(gt_dir, true);
  const LossBreakdown loss = total_loss(pred, gt);
  write_text(out, dump(loss_to_json(loss)));
  return loss;
}

void cmd_labels(const fs::path& scene_path, const std::optional<fs::path>& config, int long_side, bool predict,
                const fs::path& out_dir) {
  const SceneSpec scene = load_scene(scene_path);
  const RunConfig cfg = load_config(config);
  const PipelineConfig& pc = cfg.pipeline;
  if (predict) {
    write_maps(out_dir, synth_infer(scene, long_side, cfg.oracle, pc.scale_params(), pc.shrink_params()).maps);
  } else {
    write_maps(out_dir, rasterize_labels(scene, long_side, pc.scale_params(), pc.shrink_params()));
  }
}

}  // namespace adascale
