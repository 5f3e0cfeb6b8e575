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

#ifndef GRASPSIM_GEOMETRY_HPP_
#define GRASPSIM_GEOMETRY_HPP_

#include <stdexcept>

#include <Eigen/Dense>

namespace graspsim {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Right-handed rotations about the fixed axes.
Mat3 rot_x(double rad);
Mat3 rot_y(double rad);
Mat3 rot_z(double rad);

bool is_orthonormal(const Mat3& r, double tol = 1e-9);

/// Thrown when a point sits on or behind the image plane.
class BehindCameraError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/**
 * Rigid transform mapping local coordinates into the parent frame:
 * q_parent = rotation * q_local + translation.
 */
class Pose {
 public:
  Pose() = default;
  /// Throws std::invalid_argument unless rotation is orthonormal within 1e-9.
  Pose(const Mat3& rotation, const Vec3& translation_mm);

  static Pose identity() { return Pose(); }

  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  Vec3 transform(const Vec3& q) const { return rotation_ * q + translation_; }
  Pose inverse() const;

 private:
  Mat3 rotation_ = Mat3::Identity();
  Vec3 translation_ = Vec3::Zero();
};

/// a * b: apply b first, then a.
Pose compose(const Pose& a, const Pose& b);
inline Vec3 transform(const Pose& a, const Vec3& q) { return a.transform(q); }

/// Pixel coordinates measured from the principal point.
struct PixelCoord {
  double x = 0.0;
  double y = 0.0;
};

struct Projection {
  PixelCoord pixel;
  double depth_mm = 0.0;
};

/**
 * Stereo camera rig with a camera-to-world pose.
 *
 * The lateral mapping is linear in pixels: a pixel offset p from the
 * principal point sits at (pixel_scale_mm * p.x, pixel_scale_mm * p.y) in the
 * camera frame regardless of depth. focal_px and baseline_mm only enter the
 * disparity relation d = focal_px * baseline_mm / w.
 */
struct CameraModel {
  double focal_px = 1000.0;
  double baseline_mm = 5.0;
  double pixel_scale_mm = 0.25;
  Pose pose;
  int width_px = 600;
  int height_px = 600;
  double principal_x = 300.0;
  double principal_y = 300.0;

  /// Throws std::invalid_argument on non-positive focal/baseline/scale/size.
  void validate() const;

  PixelCoord from_index(double col, double row) const {
    return {col - principal_x, row - principal_y};
  }
  double column_of(const PixelCoord& p) const { return p.x + principal_x; }
  double row_of(const PixelCoord& p) const { return p.y + principal_y; }
  bool in_bounds(const PixelCoord& p) const;
};

/// q = R_cam [s p_x, s p_y, depth]^T + l_cam. Throws std::domain_error when
/// depth_mm <= 0 and std::out_of_range when p falls outside the image.
Vec3 unproject_pixel(const PixelCoord& p, double depth_mm, const CameraModel& cam);

/// Algebraic inverse of unproject_pixel. Pixel coordinates are not rounded.
/// Throws BehindCameraError when the camera-frame depth is not positive.
Projection project_point(const Vec3& q, const CameraModel& cam);

/**
 * Camera whose optical axis points at look_at from standoff_mm away, tilted
 * from the downward vertical by tilt_rad towards -y. Image x follows world x.
 */
CameraModel look_at_camera(const Vec3& look_at, double standoff_mm, double tilt_rad,
                           CameraModel intrinsics);

}  // namespace graspsim

#endif  // GRASPSIM_GEOMETRY_HPP_
