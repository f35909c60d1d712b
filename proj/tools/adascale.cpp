// SPDX-License-Identifier: Apache-2.0
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "adascale/commands.hpp"
#include "adascale/error.hpp"

using namespace adascale;

namespace {

void add_synth(CLI::App& app, int& status) {
  auto* cmd = app.add_subcommand("synth", "Generate a seeded synthetic scene");
  auto p = std::make_shared<SynthParams>();
  auto pairs = std::make_shared<bool>(false);
  auto density = std::make_shared<double>(-1.0);
  auto out = std::make_shared<std::string>("scene.json");
  cmd->add_option("--n-words", p->n_words, "Number of words")->capture_default_str();
  cmd->add_option("--height-min", p->height_min)->capture_default_str();
  cmd->add_option("--height-max", p->height_max)->capture_default_str();
  cmd->add_option("--density", *density, "Target text area over canvas area");
  cmd->add_option("--angle-max", p->angle_max_deg, "Max |rotation| in degrees")->capture_default_str();
  cmd->add_option("--width", p->canvas_width)->capture_default_str();
  cmd->add_option("--height", p->canvas_height)->capture_default_str();
  cmd->add_option("--seed", p->seed)->capture_default_str();
  cmd->add_flag("--pairs", *pairs, "Adjacent word pairs on a large canvas instead");
  cmd->add_option("--out", *out)->capture_default_str();
  cmd->callback([=, &status] {
    if (*pairs) {
      PairSceneParams pp;
      pp.seed = p->seed;
      cmd_synth_pairs(pp, *out);
    } else {
      SynthParams params = *p;
      if (*density >= 0) params.density = *density;
      cmd_synth(params, *out);
    }
    status = 0;
  });
}

void add_run(CLI::App& app, int& status) {
  auto* cmd = app.add_subcommand("run", "Detect text in a scene");
  auto a = std::make_shared<RunArgs>();
  auto scene = std::make_shared<std::string>();
  auto config = std::make_shared<std::string>();
  auto mode = std::make_shared<std::string>("adaptive");
  auto seed = std::make_shared<std::uint64_t>(0);
  auto long_side = std::make_shared<int>(0);
  auto out_dir = std::make_shared<std::string>(".");
  auto maps_dir = std::make_shared<std::string>();
  auto* seed_opt = cmd->add_option("--seed", *seed, "Detector noise seed");
  cmd->add_option("--scene", *scene)->required();
  cmd->add_option("--config", *config, "Config JSON");
  cmd->add_option("--mode", *mode, "single | adaptive")->capture_default_str();
  cmd->add_option("--long-side", *long_side, "Pass resolution in single mode");
  cmd->add_option("--out-dir", *out_dir)->capture_default_str();
  cmd->add_flag("--render", a->render, "Also write overlay.ppm");
  cmd->add_option("--maps-dir", *maps_dir, "Precomputed seg/shrunk/scale PFMs");
  cmd->callback([=, &status] {
    RunArgs args = *a;
    args.scene = *scene;
    if (!config->empty()) args.config = *config;
    args.mode = parse_mode(*mode);
    if (seed_opt->count() > 0) args.seed = *seed;
    if (*long_side > 0) args.long_side = *long_side;
    args.out_dir = *out_dir;
    if (!maps_dir->empty()) args.maps_dir = *maps_dir;
    cmd_run(args);
    status = 0;
  });
}

void add_eval(CLI::App& app, int& status) {
  auto* cmd = app.add_subcommand("eval", "Score detections against a scene");
  auto a = std::make_shared<EvalArgs>();
  auto dets = std::make_shared<std::string>();
  auto scene = std::make_shared<std::string>();
  auto stats = std::make_shared<std::string>();
  auto csv = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>("report.json");
  cmd->add_option("--detections", *dets)->required();
  cmd->add_option("--scene", *scene)->required();
  cmd->add_option("--stats", *stats, "stats.json from the run");
  cmd->add_option("--csv", *csv, "Append a row to a CSV table");
  cmd->add_option("--method", a->method)->capture_default_str();
  cmd->add_option("--iou", a->iou_thresh)->capture_default_str();
  cmd->add_option("--reference-long-side", a->reference_long_side)->capture_default_str();
  cmd->add_option("--out", *out)->capture_default_str();
  cmd->callback([=, &status] {
    EvalArgs args = *a;
    args.detections = *dets;
    args.scene = *scene;
    if (!stats->empty()) args.stats = *stats;
    if (!csv->empty()) args.csv = *csv;
    args.out = *out;
    cmd_eval(args);
    status = 0;
  });
}

void add_pack(CLI::App& app, int& status) {
  auto* cmd = app.add_subcommand("pack", "Pack rectangles into square bins");
  auto items = std::make_shared<std::string>();
  auto gutter = std::make_shared<int>(8);
  auto max_side = std::make_shared<int>(4096);
  auto out = std::make_shared<std::string>("layout.json");
  cmd->add_option("--items", *items)->required();
  cmd->add_option("--gutter", *gutter)->capture_default_str();
  cmd->add_option("--max-bin-side", *max_side)->capture_default_str();
  cmd->add_option("--out", *out)->capture_default_str();
  cmd->callback([=, &status] {
    cmd_pack(*items, *gutter, *max_side, *out);
    status = 0;
  });
}

void add_loss(CLI::App& app, int& status) {
  auto* cmd = app.add_subcommand("loss", "Training loss between two map sets");
  auto pred = std::make_shared<std::string>();
  auto gt = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>("loss.json");
  cmd->add_option("--pred", *pred, "Directory with seg/shrunk/scale.pfm")->required();
  cmd->add_option("--gt", *gt, "Directory with seg/shrunk/scale/mask.pfm")->required();
  cmd->add_option("--out", *out)->capture_default_str();
  cmd->callback([=, &status] {
    cmd_loss(*pred, *gt, *out);
    status = 0;
  });
}

void add_labels(CLI::App& app, int& status) {
  auto* cmd = app.add_subcommand("labels", "Write label or predicted maps as PFM");
  auto scene = std::make_shared<std::string>();
  auto config = std::make_shared<std::string>();
  auto long_side = std::make_shared<int>(720);
  auto predict = std::make_shared<bool>(false);
  auto out_dir = std::make_shared<std::string>("maps");
  cmd->add_option("--scene", *scene)->required();
  cmd->add_option("--config", *config);
  cmd->add_option("--long-side", *long_side)->capture_default_str();
  cmd->add_flag("--predict", *predict, "Synthetic detector output instead of labels");
  cmd->add_option("--out-dir", *out_dir)->capture_default_str();
  cmd->callback([=, &status] {
    std::optional<fs::path> cfg;
    if (!config->empty()) cfg = *config;
    cmd_labels(*scene, cfg, *long_side, *predict, *out_dir);
    status = 0;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive-scale text detection toolkit"};
  app.require_subcommand(1);
  int status = 0;
  add_synth(app, status);
  add_run(app, status);
  add_eval(app, status);
  add_pack(app, status);
  add_loss(app, status);
  add_labels(app, status);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return status;
}
