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

#ifndef GRASPSIM_RENDER_HPP_
#define GRASPSIM_RENDER_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "graspsim/geometry.hpp"
#include "graspsim/image.hpp"
#include "graspsim/scene.hpp"

namespace graspsim {

/// Camera-frame depth in mm; 0 marks pixels without a surface.
using DepthImage = Grid<double>;

struct MaskSet {
  Gray8 gripper;  // values 0 or 1
  Gray8 target;
};

struct RenderOutput {
  DepthImage depth;
  MaskSet masks;
};

/// Splats gripper and target points with a z-buffer. On an exact depth tie
/// between the two sets both masks are set.
RenderOutput render_point_sets(const std::vector<Vec3>& gripper_points,
                               const std::vector<Vec3>& target_points, const CameraModel& cam);

RenderOutput render_depth_and_masks(const SceneState& scene, const CameraModel& cam);

/// Analytic depth of an infinite plane through plane_point with the given
/// normal. Pixels whose ray misses the plane or hits behind the camera get 0.
DepthImage render_plane_depth(const Vec3& plane_point, const Vec3& plane_normal,
                              const CameraModel& cam);

struct StereoPair {
  Gray8 left;
  Gray8 right;
};

/// Procedural texture in [0, 1] at a continuous column u and integer row.
double stereo_texture(std::uint64_t seed, double u, int row);

/// 8-bit intensity of the texture; no-hit pixels use 0, so texture starts at 20.
std::uint8_t texture_intensity(std::uint64_t seed, double u, int row);

/**
 * Builds a rectified pair from a depth render. The left image shows the
 * texture at each hit pixel; the right image is the left content seen at
 * x - w with w = focal_px * baseline_mm / depth, forward-warped with linear
 * interpolation between neighbouring pixels and nearest-surface precedence.
 */
StereoPair synthesize_stereo(const DepthImage& depth, const CameraModel& cam,
                             std::uint64_t texture_seed);

StereoPair render_stereo_pair(const SceneState& scene, const CameraModel& cam,
                              std::uint64_t texture_seed);

/// Rounds depth to whole millimetres, saturating at 65535.
Gray16 depth_to_gray16(const DepthImage& depth);
/// Maps {0, 1} masks to {0, 255} for viewing.
Gray8 mask_to_gray8(const Gray8& mask);

void dump_render(const std::filesystem::path& dir, const std::string& stem,
                 const RenderOutput& frame);

}  // namespace graspsim

#endif  // GRASPSIM_RENDER_HPP_
