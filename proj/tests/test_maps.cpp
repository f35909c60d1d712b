// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <set>

#include "adascale/error.hpp"
#include "adascale/maps.hpp"
#include "adascale/pfm.hpp"
#include "adascale/random.hpp"

using namespace adascale;

namespace {

Word rect_word(int id, double x, double y, double w, double h) {
  return Word{id, {{x, y}, {x + w, y}, {x + w, y + h}, {x, y + h}}, 1.0};
}

SceneSpec one_word_scene(int cw, int ch, double x, double y, double w, double h) {
  SceneSpec s;
  s.canvas_width = cw;
  s.canvas_height = ch;
  s.words.push_back(rect_word(0, x, y, w, h));
  return s;
}

double sum(const FloatMap& m) {
  double t = 0;
  for (double v : m.data()) t += v;
  return t;
}

int reflect(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) i = i < 0 ? -i : 2 * n - 2 - i;
  return i;
}

// Direct 2-D convolution with the same truncated, normalized kernel.
FloatMap brute_blur(const FloatMap& m, double sigma) {
  const int r = static_cast<int>(std::ceil(3 * sigma));
  std::vector<double> k(2 * r + 1);
  double ks = 0;
  for (int i = -r; i <= r; ++i) ks += k[i + r] = std::exp(-0.5 * i * i / (sigma * sigma));
  for (double& v : k) v /= ks;
  FloatMap out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      double acc = 0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
          acc += k[dx + r] * k[dy + r] * m(reflect(x + dx, m.width()), reflect(y + dy, m.height()));
      out(x, y) = acc;
    }
  return out;
}

}  // namespace

TEST_CASE("float map construction") {
  CHECK_THROWS_AS(FloatMap(2, 2, std::vector<double>(3)), ShapeError);
  CHECK_THROWS_AS(FloatMap(1, 1, std::vector<double>{std::numeric_limits<double>::quiet_NaN()}), InputError);
  FloatMap m(3, 2, 0.25);
  m(2, 1) = 1.0;
  CHECK(m.data()[5] == 1.0);
}

TEST_CASE("scale normalization") {
  CHECK(normalize_scale(25) == 0.0);
  CHECK(normalize_scale(50) == doctest::Approx(0.6931471805599453).epsilon(1e-15));
  for (double s : {1.0, 25.0, 300.0}) CHECK(std::abs(denormalize_scale(normalize_scale(s)) - s) <= 1e-12 * s);
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double s = std::exp(rng.uniform(0, std::log(1e4)));
    CHECK(std::abs(denormalize_scale(normalize_scale(s)) - s) <= 1e-12 * s);
  }
  CHECK_THROWS_AS(normalize_scale(0), DomainError);
  CHECK_THROWS_AS(normalize_scale(-3), DomainError);
}

TEST_CASE("scale label of a word at native and half resolution") {
  const SceneSpec s = one_word_scene(400, 200, 100, 50, 100, 25);
  const LabelMaps full = rasterize_labels(s, 400);
  CHECK(sum(full.seg) == doctest::Approx(100 * 25));
  for (std::size_t i = 0; i < full.seg.size(); ++i) {
    if (full.text_mask.data()[i] > 0) CHECK(std::abs(full.scale.data()[i]) < 1e-12);
  }
  const LabelMaps half = rasterize_labels(s, 200);
  CHECK(half.width() == 200);
  CHECK(half.height() == 100);
  int seen = 0;
  for (std::size_t i = 0; i < half.seg.size(); ++i) {
    if (half.text_mask.data()[i] > 0) {
      CHECK(half.scale.data()[i] == doctest::Approx(std::log(12.5 / 25)).epsilon(1e-12));
      ++seen;
    }
  }
  CHECK(seen > 0);
}

TEST_CASE("empty scene gives zero maps") {
  SceneSpec s;
  s.canvas_width = 64;
  s.canvas_height = 48;
  const LabelMaps m = rasterize_labels(s, 64);
  CHECK(sum(m.seg) == 0);
  CHECK(sum(m.shrunk) == 0);
  CHECK(sum(m.scale) == 0);
  CHECK(sum(m.text_mask) == 0);
  CHECK_THROWS_AS(rasterize_labels(s, 16), InputError);
}

TEST_CASE("label invariants on random scenes") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SynthParams p;
    p.seed = seed;
    p.angle_max_deg = 40;
    const SceneSpec scene = generate_scene(p);
    const LabelMaps m = rasterize_labels(scene, 1280);
    std::size_t violations = 0;
    for (std::size_t i = 0; i < m.seg.size(); ++i) {
      violations += m.shrunk.data()[i] > m.seg.data()[i];
      violations += m.text_mask.data()[i] != m.seg.data()[i];
    }
    CHECK(violations == 0);
    for (const Word& w : scene.words) {
      const Polygon poly = word_polygon(w);
      const double raster = static_cast<double>(polygon_pixels(w.quad, 1280, 720).size());
      CHECK(std::abs(raster - poly.area()) <= poly.perimeter());
    }
  }
}

TEST_CASE("tiny words vanish from the shrunk label only") {
  const SceneSpec s = one_word_scene(100, 100, 10, 10, 30, 2);
  const LabelMaps m = rasterize_labels(s, 100);
  CHECK(sum(m.seg) > 0);
  CHECK(sum(m.shrunk) == 0);
}

TEST_CASE("average map") {
  CHECK(average_map(FloatMap(2, 2, 1.0), FloatMap(2, 2, 1.0)) == FloatMap(2, 2, 1.0));
  CHECK(average_map(FloatMap(2, 2, 1.0), FloatMap(2, 2, 0.0)) == FloatMap(2, 2, 0.5));
  CHECK(average_map(FloatMap(1, 1, 0.8), FloatMap(1, 1, 0.4))(0, 0) == doctest::Approx(0.6));
  CHECK_THROWS_AS(average_map(FloatMap(2, 2), FloatMap(2, 3)), ShapeError);
  Rng rng(4);
  FloatMap a(10, 10), b(10, 10);
  for (auto& v : a.data()) v = rng.uniform();
  for (auto& v : b.data()) v = rng.uniform();
  const FloatMap avg = average_map(a, b);
  for (std::size_t i = 0; i < avg.size(); ++i) {
    CHECK(avg.data()[i] >= std::min(a.data()[i], b.data()[i]));
    CHECK(avg.data()[i] <= std::max(a.data()[i], b.data()[i]));
  }
}

TEST_CASE("binarize uses greater-or-equal") {
  CHECK(binarize(FloatMap(3, 3, 0.6), 0.5) == FloatMap(3, 3, 1.0));
  CHECK(binarize(FloatMap(3, 3, 0.4), 0.5) == FloatMap(3, 3, 0.0));
  CHECK(binarize(FloatMap(3, 3, 0.5), 0.5) == FloatMap(3, 3, 1.0));
}

TEST_CASE("connected components") {
  FloatMap m(8, 3);
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 3; ++x) {
      m(x, y) = 1;
      m(x + 5, y) = 1;
    }
  const auto two = connected_components(m);
  REQUIRE(two.size() == 2);
  CHECK(two[0].bbox == IntRect{0, 0, 3, 3});
  CHECK(two[1].bbox == IntRect{5, 0, 3, 3});

  FloatMap d(4, 4);
  d(0, 0) = d(1, 1) = 1;
  d(2, 2) = d(3, 3) = 1;
  CHECK(connected_components(d).size() == 1);
  CHECK(connected_components(FloatMap(5, 5)).empty());
}

TEST_CASE("components partition the foreground") {
  Rng rng(8);
  FloatMap m(40, 30);
  for (auto& v : m.data()) v = rng.uniform() < 0.35 ? 1.0 : 0.0;
  const auto blobs = connected_components(m);
  std::set<std::pair<int, int>> seen;
  std::size_t fg = 0;
  for (double v : m.data()) fg += v > 0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < blobs.size(); ++i) {
    const Blob& b = blobs[i];
    CHECK_FALSE(b.pixels.empty());
    if (i > 0) {
      const auto& p = blobs[i - 1].bbox;
      CHECK((p.y < b.bbox.y || (p.y == b.bbox.y && p.x <= b.bbox.x)));
    }
    int x0 = 1 << 30, y0 = 1 << 30, x1 = -1, y1 = -1;
    for (const PixelCoord& p : b.pixels) {
      CHECK(m(p.x, p.y) == 1.0);
      CHECK(seen.insert({p.x, p.y}).second);
      x0 = std::min(x0, p.x);
      y0 = std::min(y0, p.y);
      x1 = std::max(x1, p.x);
      y1 = std::max(y1, p.y);
    }
    CHECK(b.bbox == IntRect{x0, y0, x1 - x0 + 1, y1 - y0 + 1});
    total += b.pixels.size();
  }
  CHECK(total == fg);
  // No two blobs touch under 8-connectivity.
  std::vector<int> label(m.size(), -1);
  for (std::size_t i = 0; i < blobs.size(); ++i)
    for (const PixelCoord& p : blobs[i].pixels) label[static_cast<std::size_t>(p.y * 40 + p.x)] = static_cast<int>(i);
  for (int y = 0; y < 30; ++y)
    for (int x = 0; x < 40; ++x) {
      const int a = label[static_cast<std::size_t>(y * 40 + x)];
      if (a < 0) continue;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= 40 || ny >= 30) continue;
          const int b = label[static_cast<std::size_t>(ny * 40 + nx)];
          if (b >= 0) CHECK(a == b);
        }
    }
}

TEST_CASE("separable blur matches direct convolution") {
  Rng rng(12);
  FloatMap m(17, 11);
  for (auto& v : m.data()) v = rng.uniform();
  for (double sigma : {0.7, 1.5, 2.0}) {
    const FloatMap fast = gaussian_blur(m, sigma);
    const FloatMap slow = brute_blur(m, sigma);
    for (std::size_t i = 0; i < m.size(); ++i) CHECK(fast.data()[i] == doctest::Approx(slow.data()[i]).epsilon(1e-12));
  }
  CHECK(gaussian_blur(m, 0.0) == m);
  const FloatMap flat = gaussian_blur(FloatMap(9, 9, 0.3), 2.0);
  for (double v : flat.data()) CHECK(v == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("raster geometry") {
  const RasterGeometry g = raster_geometry(1280, 720, 720);
  CHECK(g.width == 720);
  CHECK(g.height == 405);
  CHECK(g.factor == doctest::Approx(720.0 / 1280.0));
}

TEST_CASE("pfm round trip is bit exact for float data") {
  Rng rng(2);
  FloatMap m(7, 5);
  for (auto& v : m.data()) v = static_cast<float>(rng.uniform(-3, 3));
  CHECK(decode_pfm(encode_pfm(m)) == m);
  const auto path = std::filesystem::temp_directory_path() / "adascale_maps_test.pfm";
  write_pfm(path, m);
  CHECK(read_pfm(path) == m);
  std::filesystem::remove(path);
}

TEST_CASE("pfm layout and rejection") {
  FloatMap m(2, 2);
  m(0, 0) = 1.0;
  const std::string bytes = encode_pfm(m);
  CHECK(bytes.rfind("Pf\n2 2\n-1", 0) == 0);
  // Bottom row comes first in the file, so the top-left value is third.
  float third = 0;
  std::memcpy(&third, bytes.data() + bytes.size() - 8, 4);
  CHECK(third == 1.0f);
  CHECK_THROWS_AS(decode_pfm("PF\n1 1\n-1.0\n000000000000"), InputError);
  CHECK_THROWS_AS(decode_pfm(bytes.substr(0, bytes.size() - 1)), InputError);
  std::string nan = bytes;
  const float q = std::numeric_limits<float>::quiet_NaN();
  std::memcpy(nan.data() + nan.size() - 4, &q, 4);
  CHECK_THROWS_AS(decode_pfm(nan), InputError);
  CHECK_THROWS_AS(read_pfm("/nonexistent/x.pfm"), InputError);
}

TEST_CASE("big-endian pfm is read") {
  std::string be = "Pf\n1 1\n1.0\n";
  const float v = 2.5f;
  unsigned char b[4];
  std::memcpy(b, &v, 4);
  for (int i = 3; i >= 0; --i) be.push_back(static_cast<char>(b[i]));
  CHECK(decode_pfm(be)(0, 0) == 2.5);
}
