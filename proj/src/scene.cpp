// SPDX-License-Identifier: Apache-2.0
#include "adascale/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "adascale/error.hpp"
#include "adascale/random.hpp"

namespace adascale {

namespace {

constexpr int kAttemptsPerWord = 1000;

struct Box {
  double x0, y0, x1, y1;
  bool overlaps(const Box& o) const { return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1; }
};

Box bounds(const std::array<Point2, 4>& c) {
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

SceneSpec validated(SceneSpec scene) {
  if (scene.canvas_width <= 0 || scene.canvas_height <= 0) {
    throw InputError("scene canvas must have positive dims, got " + std::to_string(scene.canvas_width) + "x" +
                     std::to_string(scene.canvas_height));
  }
  std::set<int> ids;
  for (Word& w : scene.words) {
    if (!ids.insert(w.id).second) throw InputError("duplicate word id " + std::to_string(w.id));
    if (!(w.ink >= 0.0 && w.ink <= 1.0)) throw InputError("word " + std::to_string(w.id) + ": ink outside [0, 1]");
    if (w.quad.size() < 3) throw InputError("word " + std::to_string(w.id) + ": quad needs at least 3 points");
    for (Point2& p : w.quad) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw InputError("word " + std::to_string(w.id) + ": non-finite coordinate");
      }
      p.x = std::clamp(p.x, 0.0, static_cast<double>(scene.canvas_width));
      p.y = std::clamp(p.y, 0.0, static_cast<double>(scene.canvas_height));
    }
    try {
      w.quad = Polygon(w.quad).vertices();
    } catch (const GeometryError& e) {
      throw GeometryError("word " + std::to_string(w.id) + ": " + e.what());
    }
  }
  return scene;
}

Polygon word_polygon(const Word& w) { return Polygon(w.quad); }

RotatedRect word_rect(const Word& w) { return min_area_rect(w.quad); }

SceneSpec generate_scene(const SynthParams& params) {
  if (params.n_words < 0) throw InputError("n_words must be non-negative");
  if (!(params.height_min > 0) || params.height_max < params.height_min) throw InputError("invalid height range");
  if (params.canvas_width <= 0 || params.canvas_height <= 0) throw InputError("invalid canvas dims");
  if (params.density && !(*params.density > 0 && *params.density < 1)) throw InputError("density must be in (0, 1)");
  if (!(params.aspect_min >= 1.0) || params.aspect_max < params.aspect_min) throw InputError("invalid aspect range");

  SceneSpec scene;
  scene.canvas_width = params.canvas_width;
  scene.canvas_height = params.canvas_height;
  scene.seed = params.seed;
  if (params.n_words == 0) return scene;

  Rng rng(params.seed);
  const double canvas_area = static_cast<double>(params.canvas_width) * params.canvas_height;
  const double angle_max = params.angle_max_deg * std::numbers::pi / 180.0;
  std::vector<RotatedRect> placed;
  for (int id = 0; id < params.n_words; ++id) {
    const double h = rng.uniform(params.height_min, params.height_max);
    double w;
    if (params.density) {
      const double target = *params.density * canvas_area / params.n_words * rng.uniform(0.75, 1.25);
      w = std::max(target / h, h);
    } else {
      w = h * rng.uniform(params.aspect_min, params.aspect_max);
    }
    bool ok = false;
    for (int attempt = 0; attempt < kAttemptsPerWord && !ok; ++attempt) {
      const double angle = angle_max > 0 ? rng.uniform(-angle_max, angle_max) : 0.0;
      const double c = std::abs(std::cos(angle));
      const double s = std::abs(std::sin(angle));
      const double half_x = 0.5 * (w * c + h * s);
      const double half_y = 0.5 * (w * s + h * c);
      if (2 * half_x >= params.canvas_width || 2 * half_y >= params.canvas_height) continue;
      const double cx = rng.uniform(half_x, params.canvas_width - half_x);
      const double cy = rng.uniform(half_y, params.canvas_height - half_y);
      const RotatedRect cand(cx, cy, w, h, angle);
      const RotatedRect guard(cx, cy, w + params.min_gap, h + params.min_gap, angle);
      const Box gb = bounds(guard.corners());
      ok = std::none_of(placed.begin(), placed.end(), [&](const RotatedRect& other) {
        const RotatedRect og(other.cx(), other.cy(), other.width() + params.min_gap, other.height() + params.min_gap,
                             other.angle());
        if (!gb.overlaps(bounds(og.corners()))) return false;
        return intersection_area(guard.polygon(), og.polygon()) > 0.0;
      });
      if (ok) placed.push_back(cand);
    }
    if (!ok) {
      throw InputError("scene generation infeasible: could not place word " + std::to_string(id) + " after " +
                       std::to_string(kAttemptsPerWord) + " attempts");
    }
    const auto corners = placed.back().corners();
    scene.words.push_back(Word{id, {corners.begin(), corners.end()}, rng.uniform(0.6, 1.0)});
  }
  return scene;
}

SceneSpec generate_pair_scene(const PairSceneParams& params) {
  if (params.n_pairs < 0) throw InputError("n_pairs must be non-negative");
  if (!(params.height_min > 0) || params.height_max < params.height_min) throw InputError("invalid height range");
  if (!(params.pair_gap >= 0)) throw InputError("pair_gap must be non-negative");

  SceneSpec scene;
  scene.canvas_width = params.canvas_width;
  scene.canvas_height = params.canvas_height;
  scene.seed = params.seed;

  Rng rng(params.seed);
  std::vector<Box> taken;
  int next_id = 0;
  for (int pair = 0; pair < params.n_pairs; ++pair) {
    const double h = rng.uniform(params.height_min, params.height_max);
    const double w1 = h * rng.uniform(params.aspect_min, params.aspect_max);
    const double w2 = h * rng.uniform(params.aspect_min, params.aspect_max);
    const double total = w1 + params.pair_gap + w2;
    // Pairs keep a clearance of several word heights from each other so
    // that only the intra-pair gap is ever small.
    const double clearance = 3.0 * params.height_max;
    bool ok = false;
    for (int attempt = 0; attempt < kAttemptsPerWord && !ok; ++attempt) {
      if (total + 2 * h >= params.canvas_width || 3 * h >= params.canvas_height) break;
      const double x0 = rng.uniform(h, params.canvas_width - total - h);
      const double y0 = rng.uniform(h, params.canvas_height - 2 * h);
      const Box guard{x0 - clearance, y0 - clearance, x0 + total + clearance, y0 + h + clearance};
      ok = std::none_of(taken.begin(), taken.end(), [&](const Box& b) { return guard.overlaps(b); });
      if (!ok) continue;
      taken.push_back({x0, y0, x0 + total, y0 + h});
      const double xs[2][2] = {{x0, x0 + w1}, {x0 + w1 + params.pair_gap, x0 + total}};
      for (const auto& span : xs) {
        scene.words.push_back(Word{next_id++,
                                   {{span[0], y0}, {span[1], y0}, {span[1], y0 + h}, {span[0], y0 + h}},
                                   rng.uniform(0.6, 1.0)});
      }
    }
    if (!ok) {
      throw InputError("pair scene generation infeasible at pair " + std::to_string(pair));
    }
  }
  return scene;
}

}  // namespace adascale
