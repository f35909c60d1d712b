// SPDX-License-Identifier: Apache-2.0
#include "adascale/packing.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "adascale/error.hpp"

namespace adascale {

namespace {

struct Rect {
  int x, y, w, h;
  int right() const { return x + w; }
  int bottom() const { return y + h; }
  bool contains(const Rect& o) const { return o.x >= x && o.y >= y && o.right() <= right() && o.bottom() <= bottom(); }
  bool intersects(const Rect& o) const { return x < o.right() && o.x < right() && y < o.bottom() && o.y < bottom(); }
};

class MaxRectsBin {
 public:
  MaxRectsBin(int width, int height) { free_.push_back({0, 0, width, height}); }

  /// (short-side remainder, long-side remainder); lower is better.
  static std::pair<int, int> score(const Rect& f, int w, int h) {
    const int dx = f.w - w;
    const int dy = f.h - h;
    return {std::min(dx, dy), std::max(dx, dy)};
  }

  std::optional<std::pair<Rect, std::pair<int, int>>> find_scored(int w, int h) const {
    std::optional<std::pair<Rect, std::pair<int, int>>> best;
    for (const Rect& f : free_) {
      if (f.w < w || f.h < h) continue;
      const auto sc = score(f, w, h);
      if (!best || sc < best->second) best = {{Rect{f.x, f.y, w, h}, sc}};
    }
    return best;
  }

  void place(const Rect& used) {
    std::vector<Rect> next;
    next.reserve(free_.size() + 4);
    for (const Rect& f : free_) {
      if (!f.intersects(used)) {
        next.push_back(f);
        continue;
      }
      if (used.x > f.x) next.push_back({f.x, f.y, used.x - f.x, f.h});
      if (used.right() < f.right()) next.push_back({used.right(), f.y, f.right() - used.right(), f.h});
      if (used.y > f.y) next.push_back({f.x, f.y, f.w, used.y - f.y});
      if (used.bottom() < f.bottom()) next.push_back({f.x, used.bottom(), f.w, f.bottom() - used.bottom()});
    }
    // Prune rectangles contained in another; among duplicates keep the first.
    std::vector<Rect> pruned;
    pruned.reserve(next.size());
    for (std::size_t i = 0; i < next.size(); ++i) {
      bool redundant = false;
      for (std::size_t j = 0; j < next.size() && !redundant; ++j) {
        if (i == j || !next[j].contains(next[i])) continue;
        const bool same = next[i].contains(next[j]);
        redundant = !same || j < i;
      }
      if (!redundant) pruned.push_back(next[i]);
    }
    free_ = std::move(pruned);
  }

 private:
  std::vector<Rect> free_;
};

int align_up(double v) {
  const int n = static_cast<int>(std::ceil(v / kBinAlign - 1e-12));
  return std::max(1, n) * kBinAlign;
}

}  // namespace

PackResult maxrects_bssf(const std::vector<PackItem>& items, int bin_width, int bin_height, bool allow_rotate) {
  if (bin_width <= 0 || bin_height <= 0) throw InputError("bin dims must be positive");
  std::vector<PackItem> order = items;
  std::stable_sort(order.begin(), order.end(), [](const PackItem& a, const PackItem& b) {
    const int ma = std::max(a.width, a.height);
    const int mb = std::max(b.width, b.height);
    return ma > mb || (ma == mb && a.id < b.id);
  });

  PackResult res;
  res.layout.bin_width = bin_width;
  res.layout.bin_height = bin_height;
  MaxRectsBin bin(bin_width, bin_height);
  long long used_area = 0;
  for (const PackItem& item : order) {
    if (item.width <= 0 || item.height <= 0) {
      throw InputError("pack item " + std::to_string(item.id) + " has non-positive dims");
    }
    auto best = bin.find_scored(item.width, item.height);
    bool rotated = false;
    if (allow_rotate && item.width != item.height) {
      auto alt = bin.find_scored(item.height, item.width);
      if (alt && (!best || alt->second < best->second)) {
        best = alt;
        rotated = true;
      }
    }
    if (!best) {
      res.unplaced.push_back(item);
      continue;
    }
    const Rect r = best->first;
    bin.place(r);
    res.layout.placements.push_back({item.id, r.x, r.y, r.w, r.h, rotated});
    used_area += static_cast<long long>(r.w) * r.h;
  }
  res.layout.occupancy = static_cast<double>(used_area) / (static_cast<double>(bin_width) * bin_height);
  return res;
}

std::vector<KnapsackLayout> pack_all(const std::vector<PackItem>& items, int gutter, int max_bin_side) {
  if (gutter < 0) throw ConfigError("gutter must be non-negative");
  if (max_bin_side <= 0) throw ConfigError("max_bin_side must be positive");
  std::vector<PackItem> remaining;
  remaining.reserve(items.size());
  for (const PackItem& it : items) {
    if (it.width <= 0 || it.height <= 0) throw InputError("pack item " + std::to_string(it.id) + " has non-positive dims");
    const PackItem inflated{it.id, it.width + 2 * gutter, it.height + 2 * gutter};
    if (inflated.width > max_bin_side || inflated.height > max_bin_side) {
      throw OversizeError("pack item " + std::to_string(it.id) + " (" + std::to_string(inflated.width) + "x" +
                          std::to_string(inflated.height) + " with gutter) exceeds max bin side " +
                          std::to_string(max_bin_side));
    }
    remaining.push_back(inflated);
  }

  std::vector<KnapsackLayout> layouts;
  while (!remaining.empty()) {
    double total = 0.0;
    for (const PackItem& it : remaining) total += static_cast<double>(it.width) * it.height;
    int side = std::min(max_bin_side, align_up(std::sqrt(kBinSlack * total)));
    PackResult res = maxrects_bssf(remaining, side, side);
    while (!res.unplaced.empty() && side < max_bin_side) {
      side = std::min(max_bin_side, align_up(side * kBinGrowth));
      res = maxrects_bssf(remaining, side, side);
    }
    if (res.layout.placements.empty()) throw InvariantError("pack_all made no progress");
    layouts.push_back(std::move(res.layout));
    remaining = std::move(res.unplaced);
  }
  return layouts;
}

bool placements_disjoint(const KnapsackLayout& layout) {
  const auto& p = layout.placements;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const Rect a{p[i].x, p[i].y, p[i].width, p[i].height};
      const Rect b{p[j].x, p[j].y, p[j].width, p[j].height};
      if (a.intersects(b)) return false;
    }
  }
  return true;
}

bool placements_contained(const KnapsackLayout& layout) {
  return std::all_of(layout.placements.begin(), layout.placements.end(), [&](const Placement& p) {
    return p.x >= 0 && p.y >= 0 && p.x + p.width <= layout.bin_width && p.y + p.height <= layout.bin_height;
  });
}

}  // namespace adascale
