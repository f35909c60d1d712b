// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "adascale/error.hpp"
#include "adascale/packing.hpp"
#include "adascale/random.hpp"

using namespace adascale;

namespace {

std::vector<PackItem> random_items(std::uint64_t seed, int n) {
  Rng rng(seed);
  std::vector<PackItem> items;
  for (int i = 0; i < n; ++i) {
    const int h = static_cast<int>(rng.integer(8, 64));
    const double aspect = rng.uniform(1, 8);
    items.push_back({i, static_cast<int>(std::lround(h * aspect)), h});
  }
  return items;
}

// Brute-force overlap check over every pixel-free pair.
bool pairwise_disjoint(const KnapsackLayout& l) {
  for (std::size_t i = 0; i < l.placements.size(); ++i)
    for (std::size_t j = i + 1; j < l.placements.size(); ++j) {
      const Placement& a = l.placements[i];
      const Placement& b = l.placements[j];
      const int ix = std::min(a.x + a.width, b.x + b.width) - std::max(a.x, b.x);
      const int iy = std::min(a.y + a.height, b.y + b.height) - std::max(a.y, b.y);
      if (ix > 0 && iy > 0) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("two squares fill a 20x10 bin") {
  const PackResult r = maxrects_bssf({{0, 10, 10}, {1, 10, 10}}, 20, 10);
  CHECK(r.unplaced.empty());
  CHECK(r.layout.placements.size() == 2);
  CHECK(r.layout.occupancy == 1.0);
  CHECK(pairwise_disjoint(r.layout));
}

TEST_CASE("empty and oversized inputs") {
  const PackResult e = maxrects_bssf({}, 32, 32);
  CHECK(e.layout.placements.empty());
  CHECK(e.layout.occupancy == 0.0);
  const PackResult big = maxrects_bssf({{7, 30, 30}}, 20, 20);
  CHECK(big.unplaced == std::vector<PackItem>{{7, 30, 30}});
  CHECK(pack_all({}, 8, 4096).empty());
  CHECK_THROWS_AS(pack_all({{0, 5000, 10}}, 0, 4096), OversizeError);
  CHECK_THROWS_AS(pack_all({{0, 4090, 10}}, 8, 4096), OversizeError);
}

TEST_CASE("rotation lets a tall item into a wide bin") {
  const PackResult no = maxrects_bssf({{0, 10, 30}}, 30, 10);
  CHECK(no.unplaced.size() == 1);
  const PackResult yes = maxrects_bssf({{0, 10, 30}}, 30, 10, true);
  REQUIRE(yes.layout.placements.size() == 1);
  CHECK(yes.layout.placements[0].rotated);
  CHECK(yes.layout.placements[0].width == 30);
}

TEST_CASE("single item bin side") {
  const auto bins = pack_all({{0, 64, 64}}, 0, 4096);
  REQUIRE(bins.size() == 1);
  CHECK(bins[0].bin_width == 96);
  CHECK(bins[0].bin_height == 96);
  CHECK(bins[0].occupancy == doctest::Approx(64.0 * 64.0 / (96.0 * 96.0)));
}

TEST_CASE("gutter inflation") {
  const auto bins = pack_all({{3, 20, 10}}, 8, 4096);
  REQUIRE(bins.size() == 1);
  const Placement& p = bins[0].placements.at(0);
  CHECK(p.width == 36);
  CHECK(p.height == 26);
}

TEST_CASE("random workloads: overlap, containment, conservation, occupancy") {
  double sum = 0, lo = 1;
  int layouts = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto items = random_items(seed, 50);
    const auto bins = pack_all(items, 0, 4096);
    std::vector<int> ids;
    for (const auto& b : bins) {
      CHECK(placements_disjoint(b));
      CHECK(pairwise_disjoint(b));
      CHECK(placements_contained(b));
      for (const auto& p : b.placements) ids.push_back(p.id);
      sum += b.occupancy;
      lo = std::min(lo, b.occupancy);
      ++layouts;
    }
    std::sort(ids.begin(), ids.end());
    std::vector<int> want(50);
    for (int i = 0; i < 50; ++i) want[static_cast<std::size_t>(i)] = i;
    CHECK(ids == want);
    CHECK(pack_all(items, 0, 4096) == bins);
  }
  CHECK(sum / layouts >= 0.6);
  CHECK(lo >= 0.5);
}

TEST_CASE("small cap spreads items over several bins") {
  const auto items = random_items(3, 40);
  const auto bins = pack_all(items, 2, 512);
  CHECK(bins.size() > 1);
  std::size_t placed = 0;
  for (const auto& b : bins) {
    CHECK(b.bin_width <= 512);
    CHECK(placements_disjoint(b));
    CHECK(placements_contained(b));
    placed += b.placements.size();
  }
  CHECK(placed == items.size());
}

TEST_CASE("insertion order is by decreasing long side then id") {
  const PackResult r = maxrects_bssf({{0, 5, 5}, {1, 10, 3}, {2, 10, 4}}, 64, 64);
  REQUIRE(r.layout.placements.size() == 3);
  CHECK(r.layout.placements[0].id == 1);
  CHECK(r.layout.placements[1].id == 2);
  CHECK(r.layout.placements[2].id == 0);
}
