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

#include "graspsim/geometry.hpp"

#include <cmath>

namespace graspsim {

Mat3 rot_x(double rad) {
  const double c = std::cos(rad), s = std::sin(rad);
  Mat3 r;
  r << 1, 0, 0,
       0, c, -s,
       0, s, c;
  return r;
}

Mat3 rot_y(double rad) {
  const double c = std::cos(rad), s = std::sin(rad);
  Mat3 r;
  r << c, 0, s,
       0, 1, 0,
       -s, 0, c;
  return r;
}

Mat3 rot_z(double rad) {
  const double c = std::cos(rad), s = std::sin(rad);
  Mat3 r;
  r << c, -s, 0,
       s, c, 0,
       0, 0, 1;
  return r;
}

bool is_orthonormal(const Mat3& r, double tol) {
  if (!r.allFinite()) return false;
  return ((r.transpose() * r) - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol &&
         r.determinant() > 0.0;
}

Pose::Pose(const Mat3& rotation, const Vec3& translation_mm)
    : rotation_(rotation), translation_(translation_mm) {
  if (!is_orthonormal(rotation_)) {
    throw std::invalid_argument("Pose: rotation is not orthonormal");
  }
  if (!translation_.allFinite()) {
    throw std::invalid_argument("Pose: translation is not finite");
  }
}

Pose Pose::inverse() const {
  Pose inv;
  inv.rotation_ = rotation_.transpose();
  inv.translation_ = -(inv.rotation_ * translation_);
  return inv;
}

Pose compose(const Pose& a, const Pose& b) {
  return Pose(a.rotation() * b.rotation(), a.rotation() * b.translation() + a.translation());
}

void CameraModel::validate() const {
  if (!(focal_px > 0.0)) throw std::invalid_argument("camera: focal_px must be > 0");
  if (!(baseline_mm > 0.0)) throw std::invalid_argument("camera: baseline_mm must be > 0");
  if (!(pixel_scale_mm > 0.0)) {
    throw std::invalid_argument("camera: pixel_scale_mm must be > 0");
  }
  if (width_px <= 0 || height_px <= 0) {
    throw std::invalid_argument("camera: image size must be positive");
  }
}

bool CameraModel::in_bounds(const PixelCoord& p) const {
  const double col = column_of(p);
  const double row = row_of(p);
  return col >= -0.5 && row >= -0.5 && col < width_px - 0.5 && row < height_px - 0.5;
}

Vec3 unproject_pixel(const PixelCoord& p, double depth_mm, const CameraModel& cam) {
  if (!(depth_mm > 0.0)) throw std::domain_error("unproject_pixel: depth must be positive");
  if (!cam.in_bounds(p)) throw std::out_of_range("unproject_pixel: pixel outside image");
  const Vec3 local(cam.pixel_scale_mm * p.x, cam.pixel_scale_mm * p.y, depth_mm);
  return cam.pose.transform(local);
}

Projection project_point(const Vec3& q, const CameraModel& cam) {
  const Vec3 local = cam.pose.rotation().transpose() * (q - cam.pose.translation());
  if (!(local.z() > 0.0)) throw BehindCameraError("project_point: point behind camera");
  return {{local.x() / cam.pixel_scale_mm, local.y() / cam.pixel_scale_mm}, local.z()};
}

CameraModel look_at_camera(const Vec3& look_at, double standoff_mm, double tilt_rad,
                           CameraModel intrinsics) {
  const double s = std::sin(tilt_rad), c = std::cos(tilt_rad);
  const Vec3 axis_x(1.0, 0.0, 0.0);
  const Vec3 axis_z(0.0, s, -c);
  const Vec3 axis_y = axis_z.cross(axis_x);
  Mat3 r;
  r.col(0) = axis_x;
  r.col(1) = axis_y;
  r.col(2) = axis_z;
  intrinsics.pose = Pose(r, look_at - standoff_mm * axis_z);
  intrinsics.validate();
  return intrinsics;
}

}  // namespace graspsim
