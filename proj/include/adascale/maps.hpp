// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "adascale/geometry.hpp"
#include "adascale/scene.hpp"

namespace adascale {

/// Dense row-major grid of finite reals.
class FloatMap {
 public:
  FloatMap() = default;
  FloatMap(int width, int height, double fill = 0.0);
  /// Throws ShapeError on a size mismatch and InputError on non-finite data.
  FloatMap(int width, int height, std::vector<double> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool same_shape(const FloatMap& o) const { return width_ == o.width_ && height_ == o.height_; }

  double operator()(int x, int y) const { return data_[index(x, y)]; }
  double& operator()(int x, int y) { return data_[index(x, y)]; }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  friend bool operator==(const FloatMap&, const FloatMap&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

/// Throws ShapeError naming `what` when the maps differ in dims.
void require_same_shape(const FloatMap& a, const FloatMap& b, const char* what);

/// The three network channels plus the mask where the scale channel is
/// defined.
struct LabelMaps {
  FloatMap seg;
  FloatMap shrunk;
  FloatMap scale;
  FloatMap text_mask;

  int width() const { return seg.width(); }
  int height() const { return seg.height(); }
  void check_shapes() const;
  friend bool operator==(const LabelMaps&, const LabelMaps&) = default;
};

struct ScaleParams {
  double s_ref = 25.0;
};

struct IntRect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  int right() const { return x + width; }
  int bottom() const { return y + height; }
  long long area() const { return static_cast<long long>(width) * height; }
  bool overlaps(const IntRect& o) const { return x < o.right() && o.x < right() && y < o.bottom() && o.y < bottom(); }
  bool contains(double px, double py) const { return px >= x && px < right() && py >= y && py < bottom(); }
  friend bool operator==(const IntRect&, const IntRect&) = default;
};

IntRect bounding_union(const IntRect& a, const IntRect& b);

struct PixelCoord {
  int x = 0;
  int y = 0;
  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

/// 8-connected foreground region. `mean_confidence` and `scale_estimate`
/// stay 0 until scale estimation fills them.
struct Blob {
  int id = 0;
  std::vector<PixelCoord> pixels;
  IntRect bbox;
  double mean_confidence = 0.0;
  double scale_estimate = 0.0;
};

/// Output dims for rendering a canvas with its long side at `long_side`,
/// and the resize factor applied to canvas coordinates.
struct RasterGeometry {
  int width = 0;
  int height = 0;
  double factor = 1.0;
};
RasterGeometry raster_geometry(int canvas_width, int canvas_height, int long_side);

/// Linear indices of the pixels whose centers lie inside `poly` (even-odd
/// rule, half-open in x), row-major order.
std::vector<std::size_t> polygon_pixels(std::span<const Point2> poly, int width, int height);

/// Scale label of a word: ln(height / s_ref).
double normalize_scale(double s, const ScaleParams& params = {});
double denormalize_scale(double s_hat, const ScaleParams& params = {});

/// Seg, shrunk and scale labels for `scene` resized so its long side is
/// `long_side`. Words whose shrink collapses are left out of the shrunk
/// map only; where words overlap the later word's scale value wins.
LabelMaps rasterize_labels(const SceneSpec& scene, int long_side, const ScaleParams& scale = {},
                           const ShrinkParams& shrink = {});

FloatMap average_map(const FloatMap& seg, const FloatMap& shrunk);

/// 1 where value >= threshold, else 0.
FloatMap binarize(const FloatMap& m, double threshold);

/// 8-connected components of a {0,1} map, ordered by (bbox.y, bbox.x).
std::vector<Blob> connected_components(const FloatMap& binary);

/// Separable Gaussian with kernel radius ceil(3 sigma) and reflected
/// borders. sigma <= 0 returns the input.
FloatMap gaussian_blur(const FloatMap& m, double sigma);

}  // namespace adascale
