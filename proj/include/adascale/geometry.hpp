// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace adascale {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(Point2 a, double s) { return {a.x * s, a.y * s}; }
  friend Point2 operator*(double s, Point2 a) { return {a.x * s, a.y * s}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
double norm(Point2 a);

/// Shoelace area; positive for vertices ordered counter-clockwise in a
/// y-up frame (equivalently clockwise on screen, where y points down).
double signed_area(std::span<const Point2> vertices);

/// Simple polygon with strictly positive signed area.
///
/// The constructor drops repeated consecutive vertices, reverses the order
/// when the signed area is negative and rejects self-intersecting or
/// zero-area input with GeometryError.
class Polygon {
 public:
  explicit Polygon(std::vector<Point2> vertices);

  const std::vector<Point2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  double area() const;
  double perimeter() const;
  bool is_convex() const;

 private:
  std::vector<Point2> vertices_;
};

/// Oriented rectangle. `angle` is the direction of the width axis in
/// radians, normalized to [-pi/2, pi/2); width >= height > 0 always holds,
/// and height is the scale of a word.
class RotatedRect {
 public:
  /// Normalizes the angle range and swaps dims so width >= height.
  RotatedRect(double cx, double cy, double width, double height, double angle);

  double cx() const { return cx_; }
  double cy() const { return cy_; }
  Point2 center() const { return {cx_, cy_}; }
  double width() const { return width_; }
  double height() const { return height_; }
  double angle() const { return angle_; }
  double area() const { return width_ * height_; }

  /// Corners in positive-area order.
  std::array<Point2, 4> corners() const;
  Polygon polygon() const;

 private:
  double cx_, cy_, width_, height_, angle_;
};

struct ShrinkParams {
  double r = 0.4;
};

/// Throws ConfigError unless 0 < r <= 1.
void validate(const ShrinkParams& params);

/// Inward clipping distance d = Area(P) * (1 - r^2) / Perimeter(P).
double shrink_offset(const Polygon& p, const ShrinkParams& params);

/// Offsets `p` by `delta` (negative shrinks). Joins are mitered; a join whose
/// miter would extend past `miter_limit * |delta|` is beveled. Returns
/// std::nullopt when the offset collapses the polygon.
std::optional<Polygon> offset_polygon(const Polygon& p, double delta, double miter_limit = 2.0);

/// Inverse of shrinking a rectangle by shrink_offset: grows both sides by
/// 2d*, where d* solves (8 - 4k) d^2 + 2 (1 - k)(w + h) d - k w h = 0 with
/// k = 1 - r^2.
RotatedRect expand_shrunk_rect(const RotatedRect& shrunk, const ShrinkParams& params);

/// Minimum-area enclosing rectangle via rotating calipers over the convex
/// hull. Ties resolve to the smallest |angle|.
RotatedRect min_area_rect(std::span<const Point2> points);

/// Andrew's monotone chain. Collinear points are dropped; output is in
/// positive-area order.
std::vector<Point2> convex_hull(std::vector<Point2> points);

/// Sutherland-Hodgman clip of `subject` against a convex positive-area
/// `clip` polygon. The subject may be concave; degenerate bridges in the
/// output carry zero area.
std::vector<Point2> clip_to_convex(std::span<const Point2> subject, std::span<const Point2> clip);

/// Ear-clipping triangulation of a simple polygon.
std::vector<std::array<Point2, 3>> triangulate(const Polygon& p);

double intersection_area(const Polygon& a, const Polygon& b);

/// area(a & b) / area(a | b), in [0, 1].
double polygon_iou(const Polygon& a, const Polygon& b);
double rect_iou(const RotatedRect& a, const RotatedRect& b);

/// Part of `p` inside the axis-aligned box [x0, x1] x [y0, y1], or nullopt
/// when nothing of positive area remains.
std::optional<Polygon> clip_to_box(const Polygon& p, double x0, double y0, double x1, double y1);

bool point_in_polygon(Point2 q, std::span<const Point2> vertices);

Polygon scale_polygon(const Polygon& p, double s);

/// Hausdorff distance between polygon boundaries, sampled every `step`
/// along each edge. Test and diagnostics helper.
double boundary_hausdorff(const Polygon& a, const Polygon& b, double step = 0.05);

}  // namespace adascale
