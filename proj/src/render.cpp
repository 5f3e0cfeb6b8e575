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

#include "graspsim/render.hpp"

#include <algorithm>
#include <cmath>

#include "graspsim/rng.hpp"

namespace graspsim {

namespace {

constexpr double kFineCell = 1.7;
constexpr double kCoarseCell = 4.3;
constexpr double kFineWeight = 0.6;

double lattice_value(std::uint64_t seed, std::int64_t ix, std::int64_t iy) {
  std::uint64_t h = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(ix) * 0x9E3779B97F4A7C15ULL +
                                                 static_cast<std::uint64_t>(iy)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double value_noise(std::uint64_t seed, double x, double y) {
  const double fx = std::floor(x), fy = std::floor(y);
  const auto ix = static_cast<std::int64_t>(fx), iy = static_cast<std::int64_t>(fy);
  const double tx = x - fx, ty = y - fy;
  const double v00 = lattice_value(seed, ix, iy), v10 = lattice_value(seed, ix + 1, iy);
  const double v01 = lattice_value(seed, ix, iy + 1), v11 = lattice_value(seed, ix + 1, iy + 1);
  const double top = v00 + (v10 - v00) * tx;
  const double bottom = v01 + (v11 - v01) * tx;
  return top + (bottom - top) * ty;
}

struct Splatter {
  const CameraModel& cam;
  Mat3 rt;
  Vec3 origin;
  RenderOutput& out;

  void splat(const std::vector<Vec3>& pts, std::uint8_t owner) {
    for (const Vec3& q : pts) {
      const Vec3 c = rt * (q - origin);
      if (!(c.z() > 0.0)) continue;
      const double col = std::floor(c.x() / cam.pixel_scale_mm + cam.principal_x + 0.5);
      const double row = std::floor(c.y() / cam.pixel_scale_mm + cam.principal_y + 0.5);
      if (col < 0.0 || row < 0.0 || col >= cam.width_px || row >= cam.height_px) continue;
      const int x = static_cast<int>(col), y = static_cast<int>(row);
      double& z = out.depth.at(x, y);
      std::uint8_t& g = out.masks.gripper.at(x, y);
      std::uint8_t& t = out.masks.target.at(x, y);
      if (z == 0.0 || c.z() < z) {
        z = c.z();
        g = owner == 1;
        t = owner == 2;
      } else if (c.z() == z) {
        (owner == 1 ? g : t) = 1;
      }
    }
  }
};

}  // namespace

RenderOutput render_point_sets(const std::vector<Vec3>& gripper_points,
                               const std::vector<Vec3>& target_points, const CameraModel& cam) {
  cam.validate();
  RenderOutput out{DepthImage(cam.width_px, cam.height_px, 0.0),
                   {Gray8(cam.width_px, cam.height_px, 0), Gray8(cam.width_px, cam.height_px, 0)}};
  Splatter s{cam, cam.pose.rotation().transpose(), cam.pose.translation(), out};
  s.splat(gripper_points, 1);
  s.splat(target_points, 2);
  return out;
}

RenderOutput render_depth_and_masks(const SceneState& scene, const CameraModel& cam) {
  return render_point_sets(scene.gripper_world_points(), scene.target.world_points(), cam);
}

DepthImage render_plane_depth(const Vec3& plane_point, const Vec3& plane_normal,
                              const CameraModel& cam) {
  cam.validate();
  DepthImage out(cam.width_px, cam.height_px, 0.0);
  const Mat3& r = cam.pose.rotation();
  const Vec3& l = cam.pose.translation();
  const double denom = plane_normal.dot(r.col(2));
  if (denom == 0.0) return out;
  const double base = plane_normal.dot(plane_point - l);
  for (int y = 0; y < cam.height_px; ++y) {
    for (int x = 0; x < cam.width_px; ++x) {
      const PixelCoord p = cam.from_index(x, y);
      const Vec3 lateral = r * Vec3(cam.pixel_scale_mm * p.x, cam.pixel_scale_mm * p.y, 0.0);
      const double d = (base - plane_normal.dot(lateral)) / denom;
      if (d > 0.0) out.at(x, y) = d;
    }
  }
  return out;
}

double stereo_texture(std::uint64_t seed, double u, int row) {
  const double fine = value_noise(seed, u / kFineCell, row / kFineCell);
  const double coarse = value_noise(splitmix64(seed), u / kCoarseCell, row / kCoarseCell);
  return kFineWeight * fine + (1.0 - kFineWeight) * coarse;
}

std::uint8_t texture_intensity(std::uint64_t seed, double u, int row) {
  return static_cast<std::uint8_t>(std::floor(20.0 + 215.0 * stereo_texture(seed, u, row) + 0.5));
}

StereoPair synthesize_stereo(const DepthImage& depth, const CameraModel& cam,
                             std::uint64_t texture_seed) {
  cam.validate();
  const int w = depth.width(), h = depth.height();
  StereoPair pair{Gray8(w, h, 0), Gray8(w, h, 0)};
  const double fb = cam.focal_px * cam.baseline_mm;
  std::vector<double> zbuf(static_cast<std::size_t>(w));

  for (int y = 0; y < h; ++y) {
    std::fill(zbuf.begin(), zbuf.end(), -1.0);
    const auto drow = depth.row(y);
    auto lrow = pair.left.row(y);
    auto rrow = pair.right.row(y);
    auto write = [&](int k, double disp) {
      if (k < 0 || k >= w || disp <= zbuf[static_cast<std::size_t>(k)]) return;
      zbuf[static_cast<std::size_t>(k)] = disp;
      rrow[static_cast<std::size_t>(k)] = texture_intensity(texture_seed, k + disp, y);
    };
    for (int x = 0; x < w; ++x) {
      const double d0 = drow[static_cast<std::size_t>(x)];
      if (!(d0 > 0.0)) continue;
      lrow[static_cast<std::size_t>(x)] = texture_intensity(texture_seed, x, y);
      const double w0 = fb / d0;
      const double xr0 = x - w0;
      const double d1 = x + 1 < w ? drow[static_cast<std::size_t>(x + 1)] : 0.0;
      const bool prev_linked = x > 0 && drow[static_cast<std::size_t>(x - 1)] > 0.0 &&
                               std::abs(fb / drow[static_cast<std::size_t>(x - 1)] - w0) <= 1.0;
      if (d1 > 0.0 && std::abs(fb / d1 - w0) <= 1.0) {
        const double w1 = fb / d1;
        const double xr1 = x + 1 - w1;
        const double lo = std::min(xr0, xr1), hi = std::max(xr0, xr1);
        for (int k = static_cast<int>(std::ceil(lo)); k <= static_cast<int>(std::floor(hi)); ++k) {
          const double t = hi > lo ? (k - xr0) / (xr1 - xr0) : 0.0;
          write(k, w0 + t * (w1 - w0));
        }
      } else if (!prev_linked) {
        write(static_cast<int>(std::floor(xr0 + 0.5)), w0);
      }
    }
  }
  return pair;
}

StereoPair render_stereo_pair(const SceneState& scene, const CameraModel& cam,
                              std::uint64_t texture_seed) {
  return synthesize_stereo(render_depth_and_masks(scene, cam).depth, cam, texture_seed);
}

Gray16 depth_to_gray16(const DepthImage& depth) {
  Gray16 out(depth.width(), depth.height(), 0);
  for (std::size_t i = 0; i < depth.data().size(); ++i) {
    const double v = std::floor(depth.data()[i] + 0.5);
    out.data()[i] = static_cast<std::uint16_t>(std::clamp(v, 0.0, 65535.0));
  }
  return out;
}

Gray8 mask_to_gray8(const Gray8& mask) {
  Gray8 out(mask.width(), mask.height(), 0);
  for (std::size_t i = 0; i < mask.data().size(); ++i) out.data()[i] = mask.data()[i] ? 255 : 0;
  return out;
}

void dump_render(const std::filesystem::path& dir, const std::string& stem,
                 const RenderOutput& frame) {
  std::filesystem::create_directories(dir);
  write_pgm16(dir / (stem + "_depth.pgm"), depth_to_gray16(frame.depth));
  write_pgm8(dir / (stem + "_mask_gripper.pgm"), mask_to_gray8(frame.masks.gripper));
  write_pgm8(dir / (stem + "_mask_target.pgm"), mask_to_gray8(frame.masks.target));
}

}  // namespace graspsim
