// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "adascale/geometry.hpp"

namespace adascale {

/// One ground-truth word: its outline (a quadrilateral for generated scenes,
/// possibly more vertices after clipping into a knapsack) and ink level.
struct Word {
  int id = 0;
  std::vector<Point2> quad;
  double ink = 1.0;
};

struct SceneSpec {
  int canvas_width = 0;
  int canvas_height = 0;
  std::vector<Word> words;
  std::uint64_t seed = 0;

  int long_side() const { return canvas_width > canvas_height ? canvas_width : canvas_height; }
};

/// Clamps quads into the canvas, then checks dims, unique ids, ink range and
/// polygon validity. Throws InputError / GeometryError.
SceneSpec validated(SceneSpec scene);

Polygon word_polygon(const Word& w);

/// Ground-truth box of a word; its height is the word's scale.
RotatedRect word_rect(const Word& w);

struct SynthParams {
  int n_words = 20;
  double height_min = 12.0;
  double height_max = 40.0;
  /// Target total word area over canvas area. When unset each word gets an
  /// aspect ratio drawn from [aspect_min, aspect_max] instead.
  std::optional<double> density;
  double aspect_min = 2.0;
  double aspect_max = 8.0;
  double angle_max_deg = 0.0;
  int canvas_width = 1280;
  int canvas_height = 720;
  /// Minimum clearance between generated words, in pixels.
  double min_gap = 4.0;
  std::uint64_t seed = 0;
};

/// Seeded scene of non-overlapping rotated-rectangle words. Rejection
/// sampling with 1000 attempts per word; throws InputError when a word
/// cannot be placed.
SceneSpec generate_scene(const SynthParams& params);

struct PairSceneParams {
  int n_pairs = 6;
  double height_min = 24.0;
  double height_max = 27.0;
  double aspect_min = 3.0;
  double aspect_max = 5.0;
  /// Horizontal gap between the two words of a pair, in pixels.
  double pair_gap = 3.0;
  int canvas_width = 2880;
  int canvas_height = 1620;
  std::uint64_t seed = 0;
};

/// Sparse scene of horizontally adjacent word pairs, the configuration in
/// which a coarse pass cannot separate instances.
SceneSpec generate_pair_scene(const PairSceneParams& params);

}  // namespace adascale
