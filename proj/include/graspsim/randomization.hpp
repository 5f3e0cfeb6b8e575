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

#ifndef GRASPSIM_RANDOMIZATION_HPP_
#define GRASPSIM_RANDOMIZATION_HPP_

#include "graspsim/geometry.hpp"
#include "graspsim/render.hpp"
#include "graspsim/rng.hpp"
#include "graspsim/scene.hpp"

namespace graspsim {

struct RandomizationConfig {
  double cam_roll_deg = 3.0;
  double cam_pitch_deg = 3.0;
  double cam_yaw_deg = 1.0;
  double cam_distance_mm = 10.0;
  double scale_min = 0.75;
  double scale_max = 1.25;
  double action_noise = 0.01;       // fraction of Delta^xyz
  double depth_noise_range = 0.005;  // fraction of the depth dynamic range
  int blur_kernel = 3;
  double blur_sigma = 0.3;
  double cutout_min = 0.0;
  double cutout_max = 0.2;
  double cutout_size_min_px = 2.0;
  double cutout_size_max_px = 20.0;
  double cutout_overshoot = 0.05;
  /// Per-step random-walk size of the moving-camera suite, as a fraction of
  /// each camera range.
  double moving_camera_step = 0.1;

  void validate() const;
};

/// Camera pose error, held fixed for an episode unless the camera moves.
struct CameraNoise {
  double roll_rad = 0.0;
  double pitch_rad = 0.0;
  double yaw_rad = 0.0;
  double distance_mm = 0.0;
  bool operator==(const CameraNoise&) const = default;
};

CameraNoise sample_camera_noise(const RandomizationConfig& cfg, Rng& rng);

/// One random-walk step, each component clipped to its sampling range.
CameraNoise step_camera_noise(const CameraNoise& current, const RandomizationConfig& cfg, Rng& rng);

/**
 * Rotates the camera about its own centre by Rz(yaw) Ry(pitch) Rx(roll)
 * (world axes) and moves it distance_mm further from look_at along the
 * nominal line of sight.
 */
CameraModel apply_camera_noise(const CameraModel& nominal, const Vec3& look_at,
                               const CameraNoise& noise);

double sample_object_scale(const RandomizationConfig& cfg, Rng& rng);

/// Adds U(-a, a) to each translation element, a = action_noise, then clips
/// to [-1, 1]. Yaw and jaw elements are untouched.
Command perturb_action(const Command& cmd, const RandomizationConfig& cfg, Rng& rng);

/**
 * Adds U(-r, r) * (max - min) to every valid pixel, r = depth_noise_range,
 * then applies a normalized Gaussian blur whose support excludes no-hit
 * pixels. No-hit pixels stay 0.
 */
DepthImage corrupt_depth(const DepthImage& img, const RandomizationConfig& cfg, Rng& rng);

double sample_cutout_amount(const RandomizationConfig& cfg, Rng& rng);

/**
 * Clears random squares and circles (side or diameter U(size_min, size_max),
 * centred in the mask bounding box) until at least amount of the mask area
 * is removed. A shape that would push the removed fraction past
 * amount + overshoot is halved until it fits.
 */
Gray8 cutout_mask(const Gray8& mask, double amount, const RandomizationConfig& cfg, Rng& rng);

/// Independent amount and cutouts per mask.
MaskSet cutout_masks(const MaskSet& masks, const RandomizationConfig& cfg, Rng& rng);

}  // namespace graspsim

#endif  // GRASPSIM_RANDOMIZATION_HPP_
