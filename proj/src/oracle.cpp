// SPDX-License-Identifier: Apache-2.0
#include "adascale/oracle.hpp"

#include <algorithm>
#include <string>

#include "adascale/error.hpp"
#include "adascale/pfm.hpp"
#include "adascale/random.hpp"

namespace adascale {

namespace {

enum Channel : std::uint32_t { kSegChannel = 0, kShrunkChannel = 1, kScaleChannel = 2 };

void add_confidence_noise(FloatMap& m, double amp, std::uint64_t seed, Channel channel) {
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      const double u = hash_uniform(seed, channel, static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y));
      m(x, y) = std::clamp(m(x, y) + (2.0 * u - 1.0) * amp, 0.0, 1.0);
    }
  }
}

}  // namespace

void validate(const OracleConfig& cfg) {
  if (!(cfg.blur_coeff >= 0) || !(cfg.min_detectable_height >= 0) || !(cfg.noise_amp >= 0) ||
      !(cfg.scale_noise_amp >= 0)) {
    throw ConfigError("oracle amplitudes and blur coefficient must be non-negative");
  }
}

OracleOutput synth_infer(const SceneSpec& scene, int long_side, const OracleConfig& cfg, const ScaleParams& scale,
                         const ShrinkParams& shrink) {
  validate(cfg);
  const RasterGeometry g = raster_geometry(scene.canvas_width, scene.canvas_height, long_side);

  SceneSpec visible = scene;
  visible.words.clear();
  OracleOutput out;
  for (const Word& w : scene.words) {
    if (word_rect(w).height() * g.factor >= cfg.min_detectable_height) {
      visible.words.push_back(w);
      out.kept_word_ids.push_back(w.id);
    }
  }
  out.maps = rasterize_labels(visible, long_side, scale, shrink);
  out.input_width = g.width;
  out.input_height = g.height;
  out.downscale_factor = 1.0 / g.factor;

  const double sigma = cfg.blur_coeff * out.downscale_factor;
  out.maps.seg = gaussian_blur(out.maps.seg, sigma);
  out.maps.shrunk = gaussian_blur(out.maps.shrunk, sigma);
  if (cfg.noise_amp > 0) {
    add_confidence_noise(out.maps.seg, cfg.noise_amp, cfg.seed, kSegChannel);
    add_confidence_noise(out.maps.shrunk, cfg.noise_amp, cfg.seed, kShrunkChannel);
  }
  if (cfg.scale_noise_amp > 0) {
    FloatMap& s = out.maps.scale;
    for (int y = 0; y < s.height(); ++y) {
      for (int x = 0; x < s.width(); ++x) {
        if (out.maps.text_mask(x, y) < 0.5) continue;
        const double u =
            hash_uniform(cfg.seed, kScaleChannel, static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y));
        s(x, y) += (2.0 * u - 1.0) * cfg.scale_noise_amp;
      }
    }
  }
  return out;
}

SynthOracle::SynthOracle(OracleConfig cfg, ScaleParams scale, ShrinkParams shrink)
    : cfg_(cfg), scale_(scale), shrink_(shrink) {
  validate(cfg_);
  validate(shrink_);
}

OracleOutput SynthOracle::infer(const SceneSpec& scene, int long_side) const {
  return synth_infer(scene, long_side, cfg_, scale_, shrink_);
}

OracleOutput file_infer(const std::filesystem::path& seg_path, const std::filesystem::path& shrunk_path,
                        const std::filesystem::path& scale_path, double downscale_factor) {
  if (!(downscale_factor > 0)) throw ConfigError("downscale factor must be positive");
  OracleOutput out;
  out.maps.seg = read_pfm(seg_path);
  out.maps.shrunk = read_pfm(shrunk_path);
  out.maps.scale = read_pfm(scale_path);
  require_same_shape(out.maps.seg, out.maps.shrunk, "file_infer shrunk map");
  require_same_shape(out.maps.seg, out.maps.scale, "file_infer scale map");
  out.maps.text_mask = binarize(out.maps.seg, 0.5);
  out.input_width = out.maps.seg.width();
  out.input_height = out.maps.seg.height();
  out.downscale_factor = downscale_factor;
  return out;
}

OracleOutput FileOracle::infer(const SceneSpec& scene, int long_side) const {
  const RasterGeometry g = raster_geometry(scene.canvas_width, scene.canvas_height, long_side);
  if (g.width != output_.input_width || g.height != output_.input_height) {
    throw ShapeError("file oracle holds " + std::to_string(output_.input_width) + "x" +
                     std::to_string(output_.input_height) + " maps but " + std::to_string(g.width) + "x" +
                     std::to_string(g.height) + " were requested");
  }
  return output_;
}

}  // namespace adascale
