// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "adascale/error.hpp"
#include "adascale/losses.hpp"
#include "adascale/random.hpp"

using namespace adascale;

namespace {

FloatMap from(int w, int h, std::vector<double> v) { return FloatMap(w, h, std::move(v)); }

double count(const FloatMap& m) { return std::accumulate(m.data().begin(), m.data().end(), 0.0); }

LabelMaps labels(int w, int h, const std::vector<int>& seg_px, const std::vector<int>& shrunk_px) {
  LabelMaps m{FloatMap(w, h), FloatMap(w, h), FloatMap(w, h), FloatMap(w, h)};
  for (int i : seg_px) m.seg.data()[i] = m.text_mask.data()[i] = 1;
  for (int i : shrunk_px) m.shrunk.data()[i] = 1;
  return m;
}

}  // namespace

TEST_CASE("dice identities") {
  const FloatMap g = from(3, 1, {1, 0, 1});
  CHECK(dice_loss(g, g) == 0.0);
  CHECK(dice_loss(FloatMap(3, 1), g) == 1.0);
  CHECK(dice_loss(FloatMap(3, 1), FloatMap(3, 1)) == 0.0);
  CHECK(dice_loss(from(2, 1, {0.5, 0.5}), from(2, 1, {1, 0})) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(dice_loss(FloatMap(2, 1), FloatMap(1, 2)), ShapeError);
}

TEST_CASE("dice with a mask restricts the sums") {
  const FloatMap s = from(3, 1, {1, 1, 0});
  const FloatMap g = from(3, 1, {1, 0, 0});
  const FloatMap mask = from(3, 1, {1, 0, 1});
  CHECK(dice_loss(s, g, &mask) == 0.0);
  CHECK(dice_loss(s, g) == doctest::Approx(1.0 - 2.0 / 3.0));
}

TEST_CASE("dice is bounded and symmetric for binary maps") {
  Rng rng(21);
  for (int t = 0; t < 200; ++t) {
    FloatMap a(6, 5), b(6, 5);
    for (auto& v : a.data()) v = rng.uniform() < 0.4;
    for (auto& v : b.data()) v = rng.uniform() < 0.4;
    const double d = dice_loss(a, b);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    CHECK(d == doctest::Approx(dice_loss(b, a)).epsilon(1e-15));
    CHECK((d == 0.0) == (a == b));
  }
}

TEST_CASE("hard negative mask counts") {
  FloatMap g(104, 1), s(104, 1);
  for (int i = 0; i < 4; ++i) g.data()[i] = 1;
  Rng rng(2);
  for (auto& v : s.data()) v = rng.uniform();
  const FloatMap m = ohnm_mask(s, g, 3.0);
  CHECK(count(m) == 16);
  // Independent selection: sort negatives by (confidence desc, index asc).
  std::vector<int> neg;
  for (int i = 4; i < 104; ++i) neg.push_back(i);
  std::stable_sort(neg.begin(), neg.end(), [&](int a, int b) { return s.data()[a] > s.data()[b]; });
  for (int k = 0; k < 12; ++k) CHECK(m.data()[neg[k]] == 1.0);
  for (int i = 0; i < 4; ++i) CHECK(m.data()[i] == 1.0);

  CHECK(ohnm_mask(s, FloatMap(104, 1, 1.0), 3.0) == FloatMap(104, 1, 1.0));
  CHECK(ohnm_mask(s, g, 1000.0) == FloatMap(104, 1, 1.0));
}

TEST_CASE("hard negative ties go to the lower index") {
  FloatMap g(10, 1), s(10, 1, 0.5);
  g.data()[9] = 1;
  const FloatMap m = ohnm_mask(s, g, 2.0);
  CHECK(m.data()[0] == 1.0);
  CHECK(m.data()[1] == 1.0);
  CHECK(m.data()[2] == 0.0);
  CHECK(m.data()[9] == 1.0);
}

TEST_CASE("hard negatives without positives") {
  FloatMap g(50, 50), s(50, 50);
  for (std::size_t i = 0; i < s.size(); ++i) s.data()[i] = static_cast<double>(i) / static_cast<double>(s.size());
  const FloatMap m = ohnm_mask(s, g, 3.0);
  CHECK(count(m) == kOhnmEmptyPositivesKeep);
  CHECK(m.data()[s.size() - 1] == 1.0);
  CHECK(m.data()[0] == 0.0);
}

TEST_CASE("segment loss cases") {
  const LabelMaps gt = labels(4, 4, {5, 6, 9, 10}, {5});
  CHECK(segment_loss(gt, gt) == 0.0);
  LabelMaps no_core = gt;
  no_core.shrunk = FloatMap(4, 4);
  CHECK(segment_loss(no_core, gt) == doctest::Approx(0.5).epsilon(1e-15));
  LabelMaps wrong = labels(4, 4, {0, 1, 2, 3}, {});
  CHECK(segment_loss(wrong, gt) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("smooth l1 values and smoothness") {
  CHECK(smooth_l1(0) == 0.0);
  CHECK(smooth_l1(0.5) == 0.125);
  CHECK(smooth_l1(2) == 1.5);
  CHECK(smooth_l1(-2) == 1.5);
  CHECK(smooth_l1(1.0) == doctest::Approx(0.5));
  const double h = 1e-7;
  for (double x : {1.0, -1.0}) {
    const double left = (smooth_l1(x) - smooth_l1(x - h)) / h;
    const double right = (smooth_l1(x + h) - smooth_l1(x)) / h;
    CHECK(std::abs(left - right) < 1e-6);
    CHECK(std::abs(smooth_l1(x + 1e-12) - smooth_l1(x - 1e-12)) < 1e-9);
  }
}

TEST_CASE("scale loss cases") {
  const FloatMap mask = from(3, 1, {1, 1, 0});
  const FloatMap gt = from(3, 1, {0.2, -0.4, 9});
  CHECK(scale_loss(gt, gt, mask) == 0.0);
  CHECK(scale_loss(from(3, 1, {0.7, 0.1, -5}), gt, mask) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(scale_loss(from(3, 1, {5, 5, 5}), gt, FloatMap(3, 1)) == 0.0);
  CHECK_THROWS_AS(scale_loss(gt, gt, FloatMap(2, 1)), ShapeError);
}

TEST_CASE("scaling every height by lambda costs smooth_l1(ln lambda)") {
  Rng rng(5);
  FloatMap mask(20, 20), g1(20, 20), g2(20, 20);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (rng.uniform() < 0.3) continue;
    const double h = rng.uniform(4, 200);
    mask.data()[i] = 1;
    g1.data()[i] = normalize_scale(h);
    g2.data()[i] = normalize_scale(2 * h);
  }
  CHECK(scale_loss(g2, g1, mask) == doctest::Approx(smooth_l1(std::log(2.0))).epsilon(1e-12));
}

TEST_CASE("total loss combination") {
  const LabelMaps gt = labels(4, 4, {5, 6, 9, 10}, {5});
  const LossBreakdown zero = total_loss(gt, gt);
  CHECK(zero.segment == 0.0);
  CHECK(zero.scale == 0.0);
  CHECK(zero.total == 0.0);

  LabelMaps pred = gt;
  pred.shrunk = FloatMap(4, 4);
  for (int i : {5, 6, 9, 10}) pred.scale.data()[i] = 0.5;
  const LossBreakdown lb = total_loss(pred, gt);
  CHECK(lb.segment == doctest::Approx(0.5));
  CHECK(lb.scale == doctest::Approx(0.125));
  CHECK(lb.total == doctest::Approx(0.5125).epsilon(1e-14));

  const LossBreakdown off = total_loss(pred, gt, LossWeights{0, 0, 0, 3});
  CHECK(off.total == 0.0);
  CHECK_THROWS_AS(validate(LossWeights{-1, 0.5, 0.1, 3}), ConfigError);
}

TEST_CASE("total loss is monotone in each weight") {
  const LabelMaps gt = labels(4, 4, {5, 6, 9, 10}, {5});
  LabelMaps pred = labels(4, 4, {5, 6}, {});
  pred.scale.data()[5] = 1.5;
  double prev = -1;
  for (double w : {0.0, 0.1, 0.5, 1.0}) {
    const double t = total_loss(pred, gt, LossWeights{0.5, 0.5, w, 3}).total;
    CHECK(t >= prev);
    prev = t;
  }
}
