// SPDX-License-Identifier: Apache-2.0
#include "adascale/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "adascale/error.hpp"
#include "adascale/parallel.hpp"

namespace adascale {

namespace {

long long area_of(int w, int h) { return static_cast<long long>(w) * h; }

PipelineStats base_stats(const SceneSpec& scene, const PipelineConfig& cfg) {
  PipelineStats s;
  s.canvas_width = scene.canvas_width;
  s.canvas_height = scene.canvas_height;
  const RasterGeometry ref = raster_geometry(scene.canvas_width, scene.canvas_height, cfg.reference_long_side);
  s.reference_pixels = area_of(ref.width, ref.height);
  return s;
}

void finish_stats(PipelineStats& s) {
  const long long total = s.pixels_pass1 + s.pixels_pass2;
  s.reduction_ratio = total > 0 ? static_cast<double>(s.reference_pixels) / static_cast<double>(total) : 0.0;
}

/// Rescales map-space detections into original pixels and drops tiny ones.
std::vector<Detection> to_original(const std::vector<Detection>& dets, double factor, int min_area) {
  std::vector<Detection> out;
  for (const Detection& d : dets) {
    const RotatedRect r(d.rect.cx() * factor, d.rect.cy() * factor, d.rect.width() * factor,
                        d.rect.height() * factor, d.rect.angle());
    if (r.area() < min_area) continue;
    out.push_back({r, d.confidence});
  }
  return out;
}

struct Candidate {
  int blob_id;
  double x0, y0, x1, y1;
  double scale;
  double weight;
};

}  // namespace

void validate(const PipelineConfig& cfg) {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigError("pipeline." + field + ": " + why);
  };
  if (cfg.first_pass_long_side < 32) fail("first_pass_long_side", "must be at least 32");
  if (!(cfg.kappa > 0)) fail("kappa", "must be positive");
  if (!(cfg.s_ref > 0)) fail("s_ref", "must be positive");
  if (!(cfg.seg_threshold > 0 && cfg.seg_threshold < 1)) fail("seg_threshold", "must be in (0, 1)");
  if (!(cfg.blob_pad_factor >= 0)) fail("blob_pad_factor", "must be non-negative");
  if (cfg.min_blob_area < 0) fail("min_blob_area", "must be non-negative");
  if (cfg.min_det_area < 0) fail("min_det_area", "must be non-negative");
  if (cfg.gutter < 0) fail("gutter", "must be non-negative");
  if (cfg.max_bin_side < 32) fail("max_bin_side", "must be at least 32");
  if (!(cfg.shrink_r > 0 && cfg.shrink_r <= 1)) fail("shrink_r", "must be in (0, 1]");
  if (cfg.reference_long_side < 32) fail("reference_long_side", "must be at least 32");
}

std::vector<Detection> extract_detections(const FloatMap& shrunk, const PipelineConfig& cfg) {
  std::vector<Detection> dets;
  const ShrinkParams shrink = cfg.shrink_params();
  for (const Blob& blob : connected_components(binarize(shrunk, cfg.seg_threshold))) {
    // The hull of the pixel squares only depends on the extreme pixels of
    // each row.
    std::vector<Point2> corners;
    double conf = 0.0;
    std::size_t i = 0;
    while (i < blob.pixels.size()) {
      const int y = blob.pixels[i].y;
      int xmin = blob.pixels[i].x, xmax = xmin;
      for (; i < blob.pixels.size() && blob.pixels[i].y == y; ++i) {
        xmin = std::min(xmin, blob.pixels[i].x);
        xmax = std::max(xmax, blob.pixels[i].x);
        conf += shrunk(blob.pixels[i].x, y);
      }
      corners.push_back({static_cast<double>(xmin), static_cast<double>(y)});
      corners.push_back({static_cast<double>(xmin), static_cast<double>(y + 1)});
      corners.push_back({static_cast<double>(xmax + 1), static_cast<double>(y)});
      corners.push_back({static_cast<double>(xmax + 1), static_cast<double>(y + 1)});
    }
    const RotatedRect core = min_area_rect(corners);
    dets.push_back({expand_shrunk_rect(core, shrink), conf / static_cast<double>(blob.pixels.size())});
  }
  return dets;
}

RunResult single_scale_run(const SceneSpec& scene, int long_side, const PipelineConfig& cfg,
                           const SegmentationOracle& oracle) {
  validate(cfg);
  const OracleOutput out = oracle.infer(scene, long_side);
  RunResult res;
  res.detections = to_original(extract_detections(out.maps.shrunk, cfg), out.downscale_factor, cfg.min_det_area);
  res.stats = base_stats(scene, cfg);
  res.stats.pixels_pass1 = area_of(out.input_width, out.input_height);
  res.stats.blob_count = static_cast<int>(res.detections.size());
  finish_stats(res.stats);
  return res;
}

std::vector<Blob> estimate_blob_scales(const OracleOutput& output, const PipelineConfig& cfg) {
  const LabelMaps& m = output.maps;
  m.check_shapes();
  const FloatMap avg = average_map(m.seg, m.shrunk);
  const ScaleParams sp = cfg.scale_params();
  std::vector<Blob> kept;
  for (Blob& blob : connected_components(binarize(avg, cfg.seg_threshold))) {
    if (static_cast<long long>(blob.pixels.size()) < cfg.min_blob_area) continue;
    double wsum = 0.0, acc = 0.0, avg_sum = 0.0;
    for (const PixelCoord& p : blob.pixels) {
      const double w = m.seg(p.x, p.y);
      wsum += w;
      acc += w * m.scale(p.x, p.y);
      avg_sum += avg(p.x, p.y);
    }
    if (!(wsum > 0)) continue;
    blob.mean_confidence = avg_sum / static_cast<double>(blob.pixels.size());
    // Input pixels to original pixels.
    blob.scale_estimate = denormalize_scale(acc / wsum, sp) * output.downscale_factor;
    kept.push_back(std::move(blob));
  }
  return kept;
}

std::vector<RegionPlan> plan_regions(const std::vector<Blob>& blobs, const OracleOutput& output,
                                     const PipelineConfig& cfg, int canvas_width, int canvas_height) {
  const double ds = output.downscale_factor;
  std::vector<Candidate> cands;
  for (const Blob& b : blobs) {
    if (!(b.scale_estimate > 0)) continue;
    const double pad = cfg.blob_pad_factor * b.scale_estimate;
    Candidate c;
    c.blob_id = b.id;
    c.x0 = std::clamp(std::floor(b.bbox.x * ds - pad), 0.0, static_cast<double>(canvas_width));
    c.y0 = std::clamp(std::floor(b.bbox.y * ds - pad), 0.0, static_cast<double>(canvas_height));
    c.x1 = std::clamp(std::ceil(b.bbox.right() * ds + pad), 0.0, static_cast<double>(canvas_width));
    c.y1 = std::clamp(std::ceil(b.bbox.bottom() * ds + pad), 0.0, static_cast<double>(canvas_height));
    if (!(c.x1 > c.x0) || !(c.y1 > c.y0)) continue;
    c.scale = b.scale_estimate;
    c.weight = static_cast<double>(b.pixels.size());
    cands.push_back(c);
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.blob_id < b.blob_id; });

  // Merge overlapping crops until none overlap; merged crops take the union
  // box and the pixel-count-weighted scale.
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < cands.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < cands.size() && !merged; ++j) {
        Candidate& a = cands[i];
        const Candidate& b = cands[j];
        if (!(a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1)) continue;
        a.scale = (a.scale * a.weight + b.scale * b.weight) / (a.weight + b.weight);
        a.weight += b.weight;
        a.x0 = std::min(a.x0, b.x0);
        a.y0 = std::min(a.y0, b.y0);
        a.x1 = std::max(a.x1, b.x1);
        a.y1 = std::max(a.y1, b.y1);
        a.blob_id = std::min(a.blob_id, b.blob_id);
        cands.erase(cands.begin() + static_cast<std::ptrdiff_t>(j));
        merged = true;
      }
    }
  }

  const double canonical = cfg.kappa * cfg.s_ref;
  std::vector<RegionPlan> plans;
  for (const Candidate& c : cands) {
    RegionPlan p;
    p.blob_id = c.blob_id;
    p.source_rect = {static_cast<int>(c.x0), static_cast<int>(c.y0), static_cast<int>(c.x1 - c.x0),
                     static_cast<int>(c.y1 - c.y0)};
    p.scale_estimate = c.scale;
    p.resize_factor = std::clamp(canonical / c.scale, kMinResizeFactor, kMaxResizeFactor);
    p.target_width = std::max(1, static_cast<int>(std::lround(p.source_rect.width * p.resize_factor)));
    p.target_height = std::max(1, static_cast<int>(std::lround(p.source_rect.height * p.resize_factor)));
    plans.push_back(p);
  }
  std::sort(plans.begin(), plans.end(), [](const RegionPlan& a, const RegionPlan& b) { return a.blob_id < b.blob_id; });
  return plans;
}

KnapsackSet build_knapsacks(const SceneSpec& scene, const std::vector<RegionPlan>& plans, const PipelineConfig& cfg) {
  KnapsackSet set;
  if (plans.empty()) return set;
  std::vector<PackItem> items;
  items.reserve(plans.size());
  for (std::size_t i = 0; i < plans.size(); ++i) {
    items.push_back({static_cast<int>(i), plans[i].target_width, plans[i].target_height});
  }
  set.layouts = pack_all(items, cfg.gutter, cfg.max_bin_side);

  std::vector<Polygon> polys;
  polys.reserve(scene.words.size());
  for (const Word& w : scene.words) polys.push_back(word_polygon(w));

  for (std::size_t b = 0; b < set.layouts.size(); ++b) {
    const KnapsackLayout& layout = set.layouts[b];
    SceneSpec ks;
    ks.canvas_width = layout.bin_width;
    ks.canvas_height = layout.bin_height;
    ks.seed = scene.seed;
    int next_id = 0;
    for (const Placement& pl : layout.placements) {
      const RegionPlan& plan = plans[static_cast<std::size_t>(pl.id)];
      RegionTransform t;
      t.blob_id = plan.blob_id;
      t.bin_index = static_cast<int>(b);
      t.scale = plan.resize_factor;
      t.content = {pl.x + cfg.gutter, pl.y + cfg.gutter, plan.target_width, plan.target_height};
      t.translate_x = t.content.x - plan.source_rect.x * t.scale;
      t.translate_y = t.content.y - plan.source_rect.y * t.scale;
      set.transforms.push_back(t);

      const IntRect& src = plan.source_rect;
      for (std::size_t w = 0; w < scene.words.size(); ++w) {
        const auto clipped = clip_to_box(polys[w], src.x, src.y, src.right(), src.bottom());
        if (!clipped || clipped->area() < kClipRetention * polys[w].area()) continue;
        std::vector<Point2> moved;
        moved.reserve(clipped->size());
        for (const Point2& p : clipped->vertices()) moved.push_back(t.to_knapsack(p));
        // Rounded target dims can be up to half a pixel short of the
        // scaled crop; keep words inside the region content.
        const auto inside = clip_to_box(Polygon(std::move(moved)), t.content.x, t.content.y, t.content.right(),
                                        t.content.bottom());
        if (!inside) continue;
        ks.words.push_back(Word{next_id++, inside->vertices(), scene.words[w].ink});
      }
    }
    set.scenes.push_back(std::move(ks));
  }
  return set;
}

std::vector<Detection> backmap(const std::vector<Detection>& dets, const std::vector<RegionTransform>& transforms) {
  std::vector<Detection> out;
  for (const Detection& d : dets) {
    const auto it = std::find_if(transforms.begin(), transforms.end(), [&](const RegionTransform& t) {
      return t.content.contains(d.rect.cx(), d.rect.cy());
    });
    if (it == transforms.end()) continue;
    // A region is an input rendered with downscale_factor = 1 / resize_factor:
    // a knapsack length L maps to L / resize_factor original pixels, and so
    // does a refined-pass scale denormalize(s_hat).
    const Point2 c = it->to_original(d.rect.center());
    out.push_back({RotatedRect(c.x, c.y, d.rect.width() / it->scale, d.rect.height() / it->scale, d.rect.angle()),
                   d.confidence});
  }
  return out;
}

RunResult run_pipeline(const SceneSpec& scene, const PipelineConfig& cfg, const SegmentationOracle& oracle) {
  validate(cfg);
  RunResult res;
  res.stats = base_stats(scene, cfg);

  const OracleOutput coarse = oracle.infer(scene, cfg.first_pass_long_side);
  res.stats.pixels_pass1 = area_of(coarse.input_width, coarse.input_height);
  const std::vector<Blob> blobs = estimate_blob_scales(coarse, cfg);
  res.stats.blob_count = static_cast<int>(blobs.size());
  const std::vector<RegionPlan> plans = plan_regions(blobs, coarse, cfg, scene.canvas_width, scene.canvas_height);
  const KnapsackSet ks = build_knapsacks(scene, plans, cfg);
  res.stats.knapsack_count = static_cast<int>(ks.layouts.size());

  std::vector<std::vector<Detection>> per_bin(ks.scenes.size());
  parallel_for(ks.scenes.size(), [&](std::size_t b) {
    const SceneSpec& kscene = ks.scenes[b];
    const OracleOutput refined = oracle.infer(kscene, kscene.long_side());
    std::vector<RegionTransform> mine;
    for (const RegionTransform& t : ks.transforms) {
      if (t.bin_index == static_cast<int>(b)) mine.push_back(t);
    }
    const auto local = to_original(extract_detections(refined.maps.shrunk, cfg), refined.downscale_factor, 0);
    per_bin[b] = backmap(local, mine);
  });
  for (std::size_t b = 0; b < per_bin.size(); ++b) {
    res.stats.pixels_pass2 += area_of(ks.layouts[b].bin_width, ks.layouts[b].bin_height);
    for (const Detection& d : per_bin[b]) {
      if (d.rect.area() >= cfg.min_det_area) res.detections.push_back(d);
    }
  }
  finish_stats(res.stats);
  return res;
}

}  // namespace adascale
