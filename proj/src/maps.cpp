// SPDX-License-Identifier: Apache-2.0
#include "adascale/maps.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adascale/error.hpp"

namespace adascale {

namespace {

int reflect(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i = std::abs(i) % period;
  return i >= n ? period - i : i;
}

}  // namespace

FloatMap::FloatMap(int width, int height, double fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw ShapeError("negative map dims");
  if (!std::isfinite(fill)) throw InputError("non-finite map fill value");
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

FloatMap::FloatMap(int width, int height, std::vector<double> data) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw ShapeError("negative map dims");
  if (data.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw ShapeError("map data holds " + std::to_string(data.size()) + " values, expected " + std::to_string(width) +
                     "x" + std::to_string(height));
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i])) throw InputError("non-finite map value at index " + std::to_string(i));
  }
  data_ = std::move(data);
}

void require_same_shape(const FloatMap& a, const FloatMap& b, const char* what) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(what) + ": map dims differ (" + std::to_string(a.width()) + "x" +
                     std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                     std::to_string(b.height()) + ")");
  }
}

void LabelMaps::check_shapes() const {
  require_same_shape(seg, shrunk, "label maps");
  require_same_shape(seg, scale, "label maps");
  require_same_shape(seg, text_mask, "label maps");
}

IntRect bounding_union(const IntRect& a, const IntRect& b) {
  const int x0 = std::min(a.x, b.x);
  const int y0 = std::min(a.y, b.y);
  return {x0, y0, std::max(a.right(), b.right()) - x0, std::max(a.bottom(), b.bottom()) - y0};
}

RasterGeometry raster_geometry(int canvas_width, int canvas_height, int long_side) {
  if (canvas_width <= 0 || canvas_height <= 0) throw InputError("canvas must have positive dims");
  if (long_side <= 0) throw InputError("long side must be positive");
  RasterGeometry g;
  g.factor = static_cast<double>(long_side) / std::max(canvas_width, canvas_height);
  g.width = std::max(1, static_cast<int>(std::lround(canvas_width * g.factor)));
  g.height = std::max(1, static_cast<int>(std::lround(canvas_height * g.factor)));
  return g;
}

std::vector<std::size_t> polygon_pixels(std::span<const Point2> poly, int width, int height) {
  std::vector<std::size_t> out;
  if (poly.size() < 3 || width <= 0 || height <= 0) return out;
  double ymin = poly[0].y, ymax = poly[0].y;
  for (const Point2& p : poly) {
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const int row0 = std::max(0, static_cast<int>(std::floor(ymin - 0.5)));
  const int row1 = std::min(height - 1, static_cast<int>(std::ceil(ymax - 0.5)));
  std::vector<double> xs;
  for (int y = row0; y <= row1; ++y) {
    const double yc = y + 0.5;
    xs.clear();
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Point2 a = poly[i];
      const Point2 b = poly[(i + 1) % poly.size()];
      if ((a.y <= yc) != (b.y <= yc)) xs.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      const int x_begin = std::max(0, static_cast<int>(std::ceil(xs[k] - 0.5)));
      const int x_end = std::min(width, static_cast<int>(std::ceil(xs[k + 1] - 0.5)));
      for (int x = x_begin; x < x_end; ++x) {
        out.push_back(static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x));
      }
    }
  }
  return out;
}

double normalize_scale(double s, const ScaleParams& params) {
  if (!(s > 0)) throw DomainError("scale must be positive, got " + std::to_string(s));
  if (!(params.s_ref > 0)) throw ConfigError("s_ref must be positive");
  return std::log(s / params.s_ref);
}

double denormalize_scale(double s_hat, const ScaleParams& params) {
  if (!(params.s_ref > 0)) throw ConfigError("s_ref must be positive");
  return params.s_ref * std::exp(s_hat);
}

LabelMaps rasterize_labels(const SceneSpec& scene, int long_side, const ScaleParams& scale,
                           const ShrinkParams& shrink) {
  if (long_side < 32) throw InputError("long side must be at least 32, got " + std::to_string(long_side));
  validate(shrink);
  const RasterGeometry g = raster_geometry(scene.canvas_width, scene.canvas_height, long_side);
  LabelMaps maps{FloatMap(g.width, g.height), FloatMap(g.width, g.height), FloatMap(g.width, g.height),
                 FloatMap(g.width, g.height)};
  auto seg = maps.seg.data();
  auto shrunk = maps.shrunk.data();
  auto scl = maps.scale.data();
  auto mask = maps.text_mask.data();
  for (const Word& word : scene.words) {
    const Polygon poly = scale_polygon(word_polygon(word), g.factor);
    const double s_hat = normalize_scale(word_rect(word).height() * g.factor, scale);
    for (std::size_t i : polygon_pixels(poly.vertices(), g.width, g.height)) {
      seg[i] = 1.0;
      mask[i] = 1.0;
      scl[i] = s_hat;
    }
    const auto core = offset_polygon(poly, -shrink_offset(poly, shrink));
    if (!core) continue;
    for (std::size_t i : polygon_pixels(core->vertices(), g.width, g.height)) shrunk[i] = 1.0;
  }
  return maps;
}

FloatMap average_map(const FloatMap& seg, const FloatMap& shrunk) {
  require_same_shape(seg, shrunk, "average_map");
  FloatMap out(seg.width(), seg.height());
  auto o = out.data();
  const auto a = seg.data();
  const auto b = shrunk.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = 0.5 * (a[i] + b[i]);
  return out;
}

FloatMap binarize(const FloatMap& m, double threshold) {
  FloatMap out(m.width(), m.height());
  auto o = out.data();
  const auto in = m.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = in[i] >= threshold ? 1.0 : 0.0;
  return out;
}

std::vector<Blob> connected_components(const FloatMap& binary) {
  const int w = binary.width();
  const int h = binary.height();
  std::vector<int> label(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), -1);
  const auto in = binary.data();
  std::vector<Blob> blobs;
  std::vector<PixelCoord> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * w + x;
      if (in[idx] < 0.5 || label[idx] >= 0) continue;
      Blob blob;
      const int id = static_cast<int>(blobs.size());
      label[idx] = id;
      stack.push_back({x, y});
      int x0 = x, y0 = y, x1 = x, y1 = y;
      while (!stack.empty()) {
        const PixelCoord p = stack.back();
        stack.pop_back();
        blob.pixels.push_back(p);
        x0 = std::min(x0, p.x);
        y0 = std::min(y0, p.y);
        x1 = std::max(x1, p.x);
        y1 = std::max(y1, p.y);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = p.x + dx;
            const int ny = p.y + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            const std::size_t n = static_cast<std::size_t>(ny) * w + nx;
            if (in[n] >= 0.5 && label[n] < 0) {
              label[n] = id;
              stack.push_back({nx, ny});
            }
          }
        }
      }
      std::sort(blob.pixels.begin(), blob.pixels.end(),
                [](PixelCoord a, PixelCoord b) { return a.y < b.y || (a.y == b.y && a.x < b.x); });
      blob.bbox = {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
      blobs.push_back(std::move(blob));
    }
  }
  // Discovery order already sorts by first pixel; re-sort on bbox for the
  // documented (top, left) order, keeping discovery order on ties.
  std::stable_sort(blobs.begin(), blobs.end(), [](const Blob& a, const Blob& b) {
    return a.bbox.y < b.bbox.y || (a.bbox.y == b.bbox.y && a.bbox.x < b.bbox.x);
  });
  for (std::size_t i = 0; i < blobs.size(); ++i) blobs[i].id = static_cast<int>(i);
  return blobs;
}

FloatMap gaussian_blur(const FloatMap& m, double sigma) {
  if (!(sigma > 0)) return m;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    total += kernel[i + radius];
  }
  for (double& k : kernel) k /= total;

  const int w = m.width();
  const int h = m.height();
  FloatMap tmp(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) acc += kernel[i + radius] * m(reflect(x + i, w), y);
      tmp(x, y) = acc;
    }
  }
  FloatMap out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) acc += kernel[i + radius] * tmp(x, reflect(y + i, h));
      out(x, y) = acc;
    }
  }
  return out;
}

}  // namespace adascale
