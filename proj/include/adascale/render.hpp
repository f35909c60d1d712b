// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "adascale/pipeline.hpp"
#include "adascale/scene.hpp"

namespace adascale {

/// Binary PPM (P6) of the scene at its canvas size: words filled dark by
/// ink level, ground-truth outlines in green, detections in red.
std::string render_overlay(const SceneSpec& scene, const std::vector<Detection>& dets);

}  // namespace adascale
