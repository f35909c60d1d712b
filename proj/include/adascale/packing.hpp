// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace adascale {

struct PackItem {
  int id = 0;
  int width = 0;
  int height = 0;
  friend bool operator==(const PackItem&, const PackItem&) = default;
};

struct Placement {
  int id = 0;
  int x = 0;
  int y = 0;
  /// Footprint in the bin (swapped relative to the item when rotated).
  int width = 0;
  int height = 0;
  bool rotated = false;
  friend bool operator==(const Placement&, const Placement&) = default;
};

struct KnapsackLayout {
  int bin_width = 0;
  int bin_height = 0;
  std::vector<Placement> placements;
  /// Placed item area over bin area.
  double occupancy = 0.0;
  friend bool operator==(const KnapsackLayout&, const KnapsackLayout&) = default;
};

struct PackResult {
  KnapsackLayout layout;
  std::vector<PackItem> unplaced;
};

/// Maximal Rectangles packing with the Best Short Side Fit rule. Items go in
/// by decreasing max(width, height), ties by id; each takes the free
/// rectangle that leaves the smallest short-side remainder (then the
/// smallest long-side remainder). Items that fit nowhere come back in
/// `unplaced`.
PackResult maxrects_bssf(const std::vector<PackItem>& items, int bin_width, int bin_height,
                         bool allow_rotate = false);

inline constexpr int kBinAlign = 32;
inline constexpr double kBinSlack = 1.15;
inline constexpr double kBinGrowth = 1.25;

/// Packs every item into as few square bins as the growth rule yields.
/// Items are inflated by `gutter` on every side, so a placement's content
/// starts at (x + gutter, y + gutter). The first bin side is the next
/// multiple of 32 at or above sqrt(1.15 * total area), capped at
/// `max_bin_side`; it grows by 25% while items remain, and a further bin is
/// opened once the cap is reached. Throws OversizeError when an inflated
/// item cannot fit a max_bin_side bin on its own.
std::vector<KnapsackLayout> pack_all(const std::vector<PackItem>& items, int gutter, int max_bin_side);

/// True when no two placements intersect (exact integer test).
bool placements_disjoint(const KnapsackLayout& layout);
/// True when every placement lies inside the bin.
bool placements_contained(const KnapsackLayout& layout);

}  // namespace adascale
