// SPDX-License-Identifier: Apache-2.0
#include "adascale/eval.hpp"

#include <algorithm>

namespace adascale {

namespace {

struct Box {
  double x0, y0, x1, y1;
};

Box bounds(const RotatedRect& r) {
  const auto c = r.corners();
  Box b{c[0].x, c[0].y, c[0].x, c[0].y};
  for (const Point2& p : c) {
    b.x0 = std::min(b.x0, p.x);
    b.y0 = std::min(b.y0, p.y);
    b.x1 = std::max(b.x1, p.x);
    b.y1 = std::max(b.y1, p.y);
  }
  return b;
}

}  // namespace

std::vector<Match> match_detections(const std::vector<RotatedRect>& dets, const std::vector<RotatedRect>& gts,
                                    double iou_thresh) {
  std::vector<Box> db, gb;
  for (const auto& d : dets) db.push_back(bounds(d));
  for (const auto& g : gts) gb.push_back(bounds(g));
  std::vector<Match> cands;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    for (std::size_t j = 0; j < gts.size(); ++j) {
      if (db[i].x1 <= gb[j].x0 || gb[j].x1 <= db[i].x0 || db[i].y1 <= gb[j].y0 || gb[j].y1 <= db[i].y0) continue;
      const double iou = rect_iou(dets[i], gts[j]);
      if (iou >= iou_thresh && iou > 0) cands.push_back({static_cast<int>(i), static_cast<int>(j), iou});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Match& a, const Match& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.gt_id != b.gt_id) return a.gt_id < b.gt_id;
    return a.det_id < b.det_id;
  });
  std::vector<bool> det_used(dets.size()), gt_used(gts.size());
  std::vector<Match> out;
  for (const Match& m : cands) {
    if (det_used[m.det_id] || gt_used[m.gt_id]) continue;
    det_used[m.det_id] = true;
    gt_used[m.gt_id] = true;
    out.push_back(m);
  }
  return out;
}

std::vector<Match> match_detections(const std::vector<Detection>& dets, const std::vector<RotatedRect>& gts,
                                    double iou_thresh) {
  std::vector<RotatedRect> rects;
  rects.reserve(dets.size());
  for (const Detection& d : dets) rects.push_back(d.rect);
  return match_detections(rects, gts, iou_thresh);
}

Scores score(std::size_t n_matches, std::size_t n_dets, std::size_t n_gts) {
  Scores s;
  s.recall = n_gts > 0 ? static_cast<double>(n_matches) / static_cast<double>(n_gts) : 0.0;
  s.precision = n_dets > 0 ? static_cast<double>(n_matches) / static_cast<double>(n_dets) : 0.0;
  const double pr = s.precision + s.recall;
  s.f_score = pr > 0 ? 2.0 * s.precision * s.recall / pr : 0.0;
  return s;
}

PixelReport pixel_report(const std::vector<PipelineStats>& stats, int reference_long_side) {
  PixelReport r;
  r.scenes = static_cast<int>(stats.size());
  for (const PipelineStats& s : stats) {
    const RasterGeometry g = raster_geometry(s.canvas_width, s.canvas_height, reference_long_side);
    const long long ref = static_cast<long long>(g.width) * g.height;
    const long long total = s.pixels_pass1 + s.pixels_pass2;
    r.total_pass1 += s.pixels_pass1;
    r.total_pass2 += s.pixels_pass2;
    r.total_pixels += total;
    r.total_reference += ref;
    r.per_scene_ratio.push_back(total > 0 ? static_cast<double>(ref) / static_cast<double>(total) : 0.0);
  }
  if (r.scenes > 0) {
    r.mean_pass1 = static_cast<double>(r.total_pass1) / r.scenes;
    r.mean_pass2 = static_cast<double>(r.total_pass2) / r.scenes;
    r.mean_pixels = static_cast<double>(r.total_pixels) / r.scenes;
  }
  r.reduction_ratio =
      r.total_pixels > 0 ? static_cast<double>(r.total_reference) / static_cast<double>(r.total_pixels) : 0.0;
  return r;
}

std::vector<RotatedRect> ground_truth(const SceneSpec& scene) {
  std::vector<RotatedRect> gts;
  gts.reserve(scene.words.size());
  for (const Word& w : scene.words) gts.push_back(word_rect(w));
  return gts;
}

SceneEval evaluate_scene(const std::vector<Detection>& dets, const SceneSpec& scene, double iou_thresh) {
  SceneEval e;
  const auto gts = ground_truth(scene);
  e.n_dets = dets.size();
  e.n_gts = gts.size();
  e.matches = match_detections(dets, gts, iou_thresh);
  e.scores = score(e.matches.size(), e.n_dets, e.n_gts);
  return e;
}

EvalReport aggregate(std::vector<SceneEval> scenes, const std::vector<PipelineStats>& stats, int reference_long_side) {
  EvalReport r;
  std::size_t matches = 0, dets = 0, gts = 0;
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    scenes[i].scene_index = static_cast<int>(i);
    matches += scenes[i].matches.size();
    dets += scenes[i].n_dets;
    gts += scenes[i].n_gts;
    r.matches.insert(r.matches.end(), scenes[i].matches.begin(), scenes[i].matches.end());
  }
  r.scores = score(matches, dets, gts);
  r.pixels = pixel_report(stats, reference_long_side);
  r.per_scene = std::move(scenes);
  return r;
}

}  // namespace adascale
