// SPDX-License-Identifier: Apache-2.0
#include "adascale/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "adascale/error.hpp"

namespace adascale {

namespace {

constexpr double kPi = std::numbers::pi;

double orient(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

bool on_segment(Point2 a, Point2 b, Point2 q) {
  return std::min(a.x, b.x) <= q.x && q.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= q.y &&
         q.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double d1 = orient(c, d, a);
  const double d2 = orient(c, d, b);
  const double d3 = orient(a, b, c);
  const double d4 = orient(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  if (d1 == 0 && on_segment(c, d, a)) return true;
  if (d2 == 0 && on_segment(c, d, b)) return true;
  if (d3 == 0 && on_segment(a, b, c)) return true;
  if (d4 == 0 && on_segment(a, b, d)) return true;
  return false;
}

bool is_simple(const std::vector<Point2>& v) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = v[i];
    const Point2 b = v[(i + 1) % n];
    // Adjacent edges folding back onto each other.
    const Point2 c = v[(i + 2) % n];
    if (orient(a, b, c) == 0 && dot(b - a, c - b) < 0) return false;
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_intersect(a, b, v[j], v[(j + 1) % n])) return false;
    }
  }
  return true;
}

std::vector<Point2> drop_repeats(std::vector<Point2> v) {
  std::vector<Point2> out;
  out.reserve(v.size());
  for (const Point2& p : v) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

/// Removes near-duplicate and collinear vertices left behind by clipping.
std::vector<Point2> clean_ring(const std::vector<Point2>& v, double eps) {
  std::vector<Point2> out;
  for (const Point2& p : v) {
    if (out.empty() || norm(out.back() - p) > eps) out.push_back(p);
  }
  while (out.size() > 1 && norm(out.front() - out.back()) <= eps) out.pop_back();
  bool changed = true;
  while (changed && out.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < out.size() && out.size() >= 3; ++i) {
      const Point2 a = out[(i + out.size() - 1) % out.size()];
      const Point2 b = out[i];
      const Point2 c = out[(i + 1) % out.size()];
      const double len = norm(c - a);
      if (len <= eps || std::abs(orient(a, b, c)) <= eps * len) {
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return out;
}

std::vector<Point2> clip_half_plane(const std::vector<Point2>& poly, Point2 a, Point2 dir, double shift) {
  // Keeps points p with cross(dir, p - a) / |dir| >= shift.
  const double len = norm(dir);
  auto side = [&](Point2 p) { return cross(dir, p - a) / len - shift; };
  std::vector<Point2> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p = poly[i];
    const Point2 q = poly[(i + 1) % n];
    const double sp = side(p);
    const double sq = side(q);
    if (sp >= 0) out.push_back(p);
    if ((sp >= 0) != (sq >= 0)) {
      const double t = sp / (sp - sq);
      out.push_back(p + (q - p) * t);
    }
  }
  return out;
}

std::optional<Polygon> try_polygon(std::vector<Point2> v) {
  if (v.size() < 3) return std::nullopt;
  try {
    return Polygon(std::move(v));
  } catch (const GeometryError&) {
    return std::nullopt;
  }
}

double polygon_scale(const Polygon& p) {
  double s = 0.0;
  for (const Point2& q : p.vertices()) s = std::max({s, std::abs(q.x), std::abs(q.y)});
  return std::max(s, 1.0);
}

std::optional<Polygon> shrink_convex(const Polygon& p, double amount) {
  std::vector<Point2> ring = p.vertices();
  const auto& v = p.vertices();
  for (std::size_t i = 0; i < v.size() && !ring.empty(); ++i) {
    ring = clip_half_plane(ring, v[i], v[(i + 1) % v.size()] - v[i], amount);
  }
  ring = clean_ring(ring, 1e-9 * polygon_scale(p));
  if (ring.size() < 3 || signed_area(ring) <= 1e-12 * p.area()) return std::nullopt;
  return try_polygon(std::move(ring));
}

std::optional<Polygon> offset_mitered(const Polygon& p, double delta, double miter_limit) {
  const auto& v = p.vertices();
  const std::size_t n = v.size();
  std::vector<Point2> normals(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 d = v[(i + 1) % n] - v[i];
    const double len = norm(d);
    normals[i] = {d.y / len, -d.x / len};
  }
  std::vector<Point2> out;
  std::vector<std::size_t> first(n), last(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 n1 = normals[(i + n - 1) % n];
    const Point2 n2 = normals[i];
    const double c = dot(n1, n2);
    const double turn = cross(v[i] - v[(i + n - 1) % n], v[(i + 1) % n] - v[i]);
    const bool outer = (delta > 0) == (turn > 0);
    first[i] = out.size();
    if (1.0 + c < 1e-12) {
      out.push_back(v[i] + n1 * delta);
      out.push_back(v[i] + n2 * delta);
    } else if (outer && std::sqrt(2.0 / (1.0 + c)) > miter_limit) {
      out.push_back(v[i] + n1 * delta);
      out.push_back(v[i] + n2 * delta);
    } else {
      out.push_back(v[i] + (n1 + n2) * (delta / (1.0 + c)));
    }
    last[i] = out.size() - 1;
  }
  // Every offset edge must keep the direction of its source edge, otherwise
  // the edge was swallowed and the result is not a valid offset.
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 src = v[(i + 1) % n] - v[i];
    const Point2 dst = out[first[(i + 1) % n]] - out[last[i]];
    if (dot(src, dst) <= 0) return std::nullopt;
  }
  out = drop_repeats(std::move(out));
  if (out.size() < 3 || signed_area(out) <= 0 || !is_simple(out)) return std::nullopt;
  return try_polygon(std::move(out));
}

double point_segment_distance(Point2 q, Point2 a, Point2 b) {
  const Point2 d = b - a;
  const double len2 = dot(d, d);
  double t = len2 > 0 ? dot(q - a, d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(q - (a + d * t));
}

double directed_hausdorff(const Polygon& a, const Polygon& b, double step) {
  const auto& va = a.vertices();
  const auto& vb = b.vertices();
  double worst = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    const Point2 p = va[i];
    const Point2 q = va[(i + 1) % va.size()];
    const int samples = std::max(1, static_cast<int>(std::ceil(norm(q - p) / step)));
    for (int s = 0; s <= samples; ++s) {
      const Point2 x = p + (q - p) * (static_cast<double>(s) / samples);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < vb.size(); ++j) {
        best = std::min(best, point_segment_distance(x, vb[j], vb[(j + 1) % vb.size()]));
      }
      worst = std::max(worst, best);
    }
  }
  return worst;
}

}  // namespace

double norm(Point2 a) { return std::hypot(a.x, a.y); }

double signed_area(std::span<const Point2> v) {
  double acc = 0.0;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) acc += cross(v[i], v[(i + 1) % n]);
  return 0.5 * acc;
}

Polygon::Polygon(std::vector<Point2> vertices) {
  for (const Point2& p : vertices) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw GeometryError("polygon has non-finite vertex");
  }
  vertices = drop_repeats(std::move(vertices));
  if (vertices.size() < 3) {
    throw GeometryError("polygon needs at least 3 distinct vertices, got " + std::to_string(vertices.size()));
  }
  const double a = signed_area(vertices);
  if (a == 0.0) throw GeometryError("polygon has zero area");
  if (a < 0) std::reverse(vertices.begin(), vertices.end());
  if (!is_simple(vertices)) throw GeometryError("polygon is self-intersecting");
  vertices_ = std::move(vertices);
}

double Polygon::area() const { return signed_area(vertices_); }

double Polygon::perimeter() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    acc += norm(vertices_[(i + 1) % vertices_.size()] - vertices_[i]);
  }
  return acc;
}

bool Polygon::is_convex() const {
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (orient(vertices_[i], vertices_[(i + 1) % n], vertices_[(i + 2) % n]) < 0) return false;
  }
  return true;
}

RotatedRect::RotatedRect(double cx, double cy, double width, double height, double angle)
    : cx_(cx), cy_(cy), width_(width), height_(height), angle_(angle) {
  if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(width) || !std::isfinite(height) ||
      !std::isfinite(angle)) {
    throw GeometryError("rotated rect has non-finite field");
  }
  if (width <= 0 || height <= 0) throw GeometryError("rotated rect needs positive dims");
  if (width_ < height_) {
    std::swap(width_, height_);
    angle_ += kPi / 2;
  }
  angle_ -= kPi * std::floor((angle_ + kPi / 2) / kPi);
  if (angle_ >= kPi / 2) angle_ -= kPi;
}

std::array<Point2, 4> RotatedRect::corners() const {
  const Point2 u{std::cos(angle_), std::sin(angle_)};
  const Point2 v{-u.y, u.x};
  const Point2 c{cx_, cy_};
  const double hw = width_ / 2;
  const double hh = height_ / 2;
  return {c - u * hw - v * hh, c + u * hw - v * hh, c + u * hw + v * hh, c - u * hw + v * hh};
}

Polygon RotatedRect::polygon() const {
  const auto c = corners();
  return Polygon({c.begin(), c.end()});
}

void validate(const ShrinkParams& params) {
  if (!(params.r > 0.0 && params.r <= 1.0)) {
    throw ConfigError("shrink ratio r must be in (0, 1], got " + std::to_string(params.r));
  }
}

double shrink_offset(const Polygon& p, const ShrinkParams& params) {
  validate(params);
  const double area = p.area();
  const double perimeter = p.perimeter();
  if (!(area > 0) || !(perimeter > 0)) throw GeometryError("degenerate polygon in shrink_offset");
  return area * (1.0 - params.r * params.r) / perimeter;
}

std::optional<Polygon> offset_polygon(const Polygon& p, double delta, double miter_limit) {
  if (delta == 0.0) return p;
  if (delta < 0 && p.is_convex()) return shrink_convex(p, -delta);
  return offset_mitered(p, delta, miter_limit);
}

RotatedRect expand_shrunk_rect(const RotatedRect& shrunk, const ShrinkParams& params) {
  validate(params);
  const double k = 1.0 - params.r * params.r;
  const double w = shrunk.width();
  const double h = shrunk.height();
  const double a = 8.0 - 4.0 * k;
  const double b = 2.0 * (1.0 - k) * (w + h);
  const double c = k * w * h;
  // Positive root of a d^2 + b d - c = 0, written to avoid cancellation.
  const double d = c == 0.0 ? 0.0 : 2.0 * c / (b + std::sqrt(b * b + 4.0 * a * c));
  return RotatedRect(shrunk.cx(), shrunk.cy(), w + 2 * d, h + 2 * d, shrunk.angle());
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point2& p : pts) {
    while (k >= 2 && orient(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && orient(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

RotatedRect min_area_rect(std::span<const Point2> points) {
  if (points.size() < 3) {
    throw GeometryError("min_area_rect needs at least 3 points, got " + std::to_string(points.size()));
  }
  const std::vector<Point2> hull = convex_hull({points.begin(), points.end()});
  if (hull.size() < 3) throw GeometryError("min_area_rect: points are collinear");

  std::optional<RotatedRect> best;
  double best_area = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hull.size(); ++i) {
    Point2 u = hull[(i + 1) % hull.size()] - hull[i];
    u = u * (1.0 / norm(u));
    const Point2 v{-u.y, u.x};
    double umin = std::numeric_limits<double>::infinity(), umax = -umin;
    double vmin = umin, vmax = -umin;
    for (const Point2& p : hull) {
      umin = std::min(umin, dot(p, u));
      umax = std::max(umax, dot(p, u));
      vmin = std::min(vmin, dot(p, v));
      vmax = std::max(vmax, dot(p, v));
    }
    const double area = (umax - umin) * (vmax - vmin);
    const Point2 c = u * (0.5 * (umin + umax)) + v * (0.5 * (vmin + vmax));
    RotatedRect cand(c.x, c.y, umax - umin, vmax - vmin, std::atan2(u.y, u.x));
    const double tol = 1e-9 * std::max(best_area == std::numeric_limits<double>::infinity() ? area : best_area, 1e-300);
    if (!best || area < best_area - tol) {
      best = cand;
      best_area = area;
    } else if (std::abs(area - best_area) <= tol) {
      const double a = std::abs(cand.angle());
      const double b = std::abs(best->angle());
      if (a < b - 1e-12 || (std::abs(a - b) <= 1e-12 && cand.angle() < best->angle())) {
        best = cand;
        best_area = std::min(best_area, area);
      }
    }
  }
  return *best;
}

std::vector<Point2> clip_to_convex(std::span<const Point2> subject, std::span<const Point2> clip) {
  std::vector<Point2> ring(subject.begin(), subject.end());
  for (std::size_t i = 0; i < clip.size() && !ring.empty(); ++i) {
    ring = clip_half_plane(ring, clip[i], clip[(i + 1) % clip.size()] - clip[i], 0.0);
  }
  return ring;
}

std::vector<std::array<Point2, 3>> triangulate(const Polygon& p) {
  std::vector<Point2> ring = p.vertices();
  std::vector<std::array<Point2, 3>> tris;
  auto inside_tri = [](Point2 q, Point2 a, Point2 b, Point2 c) {
    return orient(a, b, q) >= 0 && orient(b, c, q) >= 0 && orient(c, a, q) >= 0;
  };
  while (ring.size() > 3) {
    const std::size_t n = ring.size();
    bool clipped = false;
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 a = ring[(i + n - 1) % n];
      const Point2 b = ring[i];
      const Point2 c = ring[(i + 1) % n];
      const double turn = orient(a, b, c);
      if (turn == 0) {
        ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
        clipped = true;
        break;
      }
      if (turn < 0) continue;
      bool ear = true;
      for (std::size_t j = 0; j < n && ear; ++j) {
        if (j == i || j == (i + 1) % n || j == (i + n - 1) % n) continue;
        const Point2 q = ring[j];
        if (q == a || q == b || q == c) continue;
        if (inside_tri(q, a, b, c)) ear = false;
      }
      if (!ear) continue;
      tris.push_back({a, b, c});
      ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped) {
      // Numerically stuck; finish with a fan.
      for (std::size_t i = 1; i + 1 < ring.size(); ++i) tris.push_back({ring[0], ring[i], ring[i + 1]});
      return tris;
    }
  }
  if (ring.size() == 3 && orient(ring[0], ring[1], ring[2]) > 0) tris.push_back({ring[0], ring[1], ring[2]});
  return tris;
}

double intersection_area(const Polygon& a, const Polygon& b) {
  if (b.is_convex()) return std::max(0.0, signed_area(clip_to_convex(a.vertices(), b.vertices())));
  if (a.is_convex()) return std::max(0.0, signed_area(clip_to_convex(b.vertices(), a.vertices())));
  double acc = 0.0;
  for (const auto& tri : triangulate(b)) acc += signed_area(clip_to_convex(a.vertices(), tri));
  return std::max(0.0, acc);
}

double polygon_iou(const Polygon& a, const Polygon& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  if (!(uni > 0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double rect_iou(const RotatedRect& a, const RotatedRect& b) { return polygon_iou(a.polygon(), b.polygon()); }

std::optional<Polygon> clip_to_box(const Polygon& p, double x0, double y0, double x1, double y1) {
  if (!(x1 > x0) || !(y1 > y0)) return std::nullopt;
  const std::array<Point2, 4> box{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
  std::vector<Point2> ring = clean_ring(clip_to_convex(p.vertices(), box), 1e-9 * polygon_scale(p));
  if (ring.size() < 3 || signed_area(ring) <= 0) return std::nullopt;
  return try_polygon(std::move(ring));
}

bool point_in_polygon(Point2 q, std::span<const Point2> v) {
  bool inside = false;
  const std::size_t n = v.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if ((v[i].y > q.y) != (v[j].y > q.y)) {
      const double x = v[j].x + (q.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
      if (q.x < x) inside = !inside;
    }
  }
  return inside;
}

Polygon scale_polygon(const Polygon& p, double s) {
  std::vector<Point2> out;
  out.reserve(p.size());
  for (const Point2& q : p.vertices()) out.push_back(q * s);
  return Polygon(std::move(out));
}

double boundary_hausdorff(const Polygon& a, const Polygon& b, double step) {
  return std::max(directed_hausdorff(a, b, step), directed_hausdorff(b, a, step));
}

}  // namespace adascale
