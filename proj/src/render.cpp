// SPDX-License-Identifier: Apache-2.0
#include "adascale/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "adascale/maps.hpp"

namespace adascale {

namespace {

using Rgb = std::array<unsigned char, 3>;

class Canvas {
 public:
  Canvas(int w, int h) : w_(w), h_(h), px_(static_cast<std::size_t>(w) * h * 3, 255) {}

  void set(int x, int y, Rgb c) {
    if (x < 0 || y < 0 || x >= w_ || y >= h_) return;
    const std::size_t i = (static_cast<std::size_t>(y) * w_ + x) * 3;
    std::copy(c.begin(), c.end(), px_.begin() + static_cast<std::ptrdiff_t>(i));
  }

  void line(Point2 a, Point2 b, Rgb c) {
    const double len = std::max(std::abs(b.x - a.x), std::abs(b.y - a.y));
    const int steps = std::max(1, static_cast<int>(std::ceil(len)));
    for (int s = 0; s <= steps; ++s) {
      const double t = static_cast<double>(s) / steps;
      set(static_cast<int>(std::floor(a.x + t * (b.x - a.x))), static_cast<int>(std::floor(a.y + t * (b.y - a.y))), c);
    }
  }

  void outline(const std::vector<Point2>& pts, Rgb c) {
    for (std::size_t i = 0; i < pts.size(); ++i) line(pts[i], pts[(i + 1) % pts.size()], c);
  }

  std::string encode() const {
    std::string out = "P6\n" + std::to_string(w_) + " " + std::to_string(h_) + "\n255\n";
    out.append(px_.begin(), px_.end());
    return out;
  }

  std::vector<unsigned char>& raw() { return px_; }

 private:
  int w_, h_;
  std::vector<unsigned char> px_;
};

}  // namespace

std::string render_overlay(const SceneSpec& scene, const std::vector<Detection>& dets) {
  Canvas canvas(scene.canvas_width, scene.canvas_height);
  for (const Word& w : scene.words) {
    const auto level = static_cast<unsigned char>(std::lround(255.0 * (1.0 - 0.6 * w.ink)));
    for (std::size_t idx : polygon_pixels(w.quad, scene.canvas_width, scene.canvas_height)) {
      auto& raw = canvas.raw();
      std::fill_n(raw.begin() + static_cast<std::ptrdiff_t>(idx * 3), 3, level);
    }
  }
  for (const Word& w : scene.words) canvas.outline(w.quad, {0, 160, 0});
  for (const Detection& d : dets) {
    const auto c = d.rect.corners();
    canvas.outline({c.begin(), c.end()}, {220, 0, 0});
  }
  return canvas.encode();
}

}  // namespace adascale
