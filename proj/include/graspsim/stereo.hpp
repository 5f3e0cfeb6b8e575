// Copyright 2026 The graspsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRASPSIM_STEREO_HPP_
#define GRASPSIM_STEREO_HPP_

#include "graspsim/geometry.hpp"
#include "graspsim/image.hpp"
#include "graspsim/render.hpp"

namespace graspsim {

/// Disparity in pixels; kNoMatch marks rejected pixels.
using DisparityImage = Grid<float>;

inline constexpr float kNoMatch = -1.0f;

struct MatcherConfig {
  int block = 9;
  int search_range = 128;
  double uniqueness_ratio = 0.9;
  /// Maximum |d_left - d_right| for the left-right consistency check.
  int lr_tolerance = 1;

  /// Throws ValidationError for an even or too small block or negative range.
  void validate() const;
};

/**
 * SAD block matching of a rectified pair: the left pixel x matches the right
 * pixel x - d. Pixels whose block leaves the image, that fail the uniqueness
 * ratio against the best cost outside +-1 of the winner, or that fail the
 * left-right check are marked kNoMatch, as are winners on the last candidate
 * that fits. Nonzero winners get an equiangular sub-pixel offset, averaged
 * over the left and right reference views and clamped to +-0.5.
 */
DisparityImage match_disparity(const Gray8& left, const Gray8& right, const MatcherConfig& cfg);

inline constexpr double kMinDisparity = 0.1;

/// depth = focal_px * baseline_mm / w; no-match or w <= min_disparity -> 0.
DepthImage disparity_to_depth(const DisparityImage& w, const CameraModel& cam,
                              double min_disparity = kMinDisparity);

}  // namespace graspsim

#endif  // GRASPSIM_STEREO_HPP_
