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

#include "graspsim/randomization.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "graspsim/errors.hpp"

namespace graspsim {

namespace {

constexpr int kMaxCutoutShapes = 10000;

double symmetric(Rng& rng, double half) { return half > 0.0 ? rng.uniform(-half, half) : 0.0; }

double walk(double value, double half, double step_fraction, Rng& rng) {
  if (!(half > 0.0)) return 0.0;
  return std::clamp(value + symmetric(rng, step_fraction * half), -half, half);
}

struct Shape {
  bool circle;
  double cx, cy, size;

  bool covers(int x, int y) const {
    const double dx = x - cx, dy = y - cy, r = 0.5 * size;
    return circle ? dx * dx + dy * dy <= r * r : std::abs(dx) <= r && std::abs(dy) <= r;
  }

  template <typename Fn>
  void for_each_pixel(const Gray8& m, Fn&& fn) const {
    const double r = 0.5 * size;
    const int x0 = std::max(0, static_cast<int>(std::ceil(cx - r)));
    const int x1 = std::min(m.width() - 1, static_cast<int>(std::floor(cx + r)));
    const int y0 = std::max(0, static_cast<int>(std::ceil(cy - r)));
    const int y1 = std::min(m.height() - 1, static_cast<int>(std::floor(cy + r)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        if (covers(x, y)) fn(x, y);
      }
    }
  }
};

}  // namespace

void RandomizationConfig::validate() const {
  for (double v : {cam_roll_deg, cam_pitch_deg, cam_yaw_deg, cam_distance_mm, action_noise,
                   depth_noise_range, blur_sigma, cutout_overshoot, moving_camera_step}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("randomization: ranges must be >= 0");
  }
  if (!(scale_min > 0.0) || scale_max < scale_min) throw ConfigError("randomization: bad scale range");
  if (blur_kernel < 1 || blur_kernel % 2 == 0) throw ConfigError("randomization: blur kernel must be odd");
  if (!(cutout_min >= 0.0) || cutout_max < cutout_min || cutout_max > 1.0) {
    throw ConfigError("randomization: cutout amounts must satisfy 0 <= min <= max <= 1");
  }
  if (!(cutout_size_min_px > 0.0) || cutout_size_max_px < cutout_size_min_px) {
    throw ConfigError("randomization: bad cutout size range");
  }
}

CameraNoise sample_camera_noise(const RandomizationConfig& cfg, Rng& rng) {
  CameraNoise n;
  n.roll_rad = symmetric(rng, deg_to_rad(cfg.cam_roll_deg));
  n.pitch_rad = symmetric(rng, deg_to_rad(cfg.cam_pitch_deg));
  n.yaw_rad = symmetric(rng, deg_to_rad(cfg.cam_yaw_deg));
  n.distance_mm = symmetric(rng, cfg.cam_distance_mm);
  return n;
}

CameraNoise step_camera_noise(const CameraNoise& current, const RandomizationConfig& cfg, Rng& rng) {
  const double f = cfg.moving_camera_step;
  CameraNoise n;
  n.roll_rad = walk(current.roll_rad, deg_to_rad(cfg.cam_roll_deg), f, rng);
  n.pitch_rad = walk(current.pitch_rad, deg_to_rad(cfg.cam_pitch_deg), f, rng);
  n.yaw_rad = walk(current.yaw_rad, deg_to_rad(cfg.cam_yaw_deg), f, rng);
  n.distance_mm = walk(current.distance_mm, cfg.cam_distance_mm, f, rng);
  return n;
}

CameraModel apply_camera_noise(const CameraModel& nominal, const Vec3& look_at,
                               const CameraNoise& noise) {
  CameraModel cam = nominal;
  const Mat3 delta = rot_z(noise.yaw_rad) * rot_y(noise.pitch_rad) * rot_x(noise.roll_rad);
  const Vec3 center = nominal.pose.translation();
  const Vec3 sight = center - look_at;
  const double standoff = sight.norm();
  const Vec3 moved = standoff > 0.0 ? look_at + sight * ((standoff + noise.distance_mm) / standoff)
                                    : center;
  cam.pose = Pose(delta * nominal.pose.rotation(), moved);
  return cam;
}

double sample_object_scale(const RandomizationConfig& cfg, Rng& rng) {
  return rng.uniform(cfg.scale_min, cfg.scale_max);
}

Command perturb_action(const Command& cmd, const RandomizationConfig& cfg, Rng& rng) {
  Command out = cmd;
  for (std::size_t i = 0; i < 3; ++i) {
    out.v[i] = std::clamp(out.v[i] + symmetric(rng, cfg.action_noise), -1.0, 1.0);
  }
  return out;
}

DepthImage corrupt_depth(const DepthImage& img, const RandomizationConfig& cfg, Rng& rng) {
  const int w = img.width(), h = img.height();
  int x0 = w, x1 = -1, y0 = h, y1 = -1;
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double d = img.at(x, y);
      if (!(d > 0.0)) continue;
      lo = any ? std::min(lo, d) : d;
      hi = any ? std::max(hi, d) : d;
      any = true;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!any) return img;

  DepthImage noisy = img;
  const double amp = cfg.depth_noise_range * (hi - lo);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      double& d = noisy.at(x, y);
      if (d > 0.0) d = std::max(d + symmetric(rng, amp), 1e-6);
    }
  }
  if (cfg.blur_kernel <= 1 || !(cfg.blur_sigma > 0.0)) return noisy;

  const int r = cfg.blur_kernel / 2;
  std::vector<double> weights;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      weights.push_back(std::exp(-(dx * dx + dy * dy) / (2.0 * cfg.blur_sigma * cfg.blur_sigma)));
    }
  }
  DepthImage out = noisy;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (!(noisy.at(x, y) > 0.0)) continue;
      double sum = 0.0, norm = 0.0;
      std::size_t k = 0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx, ++k) {
          const int sx = x + dx, sy = y + dy;
          if (!noisy.contains(sx, sy)) continue;
          const double d = noisy.at(sx, sy);
          if (!(d > 0.0)) continue;
          sum += weights[k] * d;
          norm += weights[k];
        }
      }
      out.at(x, y) = sum / norm;
    }
  }
  return out;
}

double sample_cutout_amount(const RandomizationConfig& cfg, Rng& rng) {
  return cfg.cutout_max > cfg.cutout_min ? rng.uniform(cfg.cutout_min, cfg.cutout_max)
                                         : cfg.cutout_min;
}

Gray8 cutout_mask(const Gray8& mask, double amount, const RandomizationConfig& cfg, Rng& rng) {
  Gray8 out = mask;
  std::size_t area = 0;
  int x0 = mask.width(), x1 = -1, y0 = mask.height(), y1 = -1;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      ++area;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (area == 0 || !(amount > 0.0)) return out;

  const double goal = amount * static_cast<double>(area);
  const double limit = (amount + cfg.cutout_overshoot) * static_cast<double>(area);
  std::size_t removed = 0;
  for (int attempt = 0; attempt < kMaxCutoutShapes && static_cast<double>(removed) < goal; ++attempt) {
    Shape s{rng.canonical() < 0.5, rng.uniform(x0, x1 + 1.0), rng.uniform(y0, y1 + 1.0),
            rng.uniform(cfg.cutout_size_min_px, cfg.cutout_size_max_px)};
    for (;;) {
      std::size_t hit = 0;
      s.for_each_pixel(out, [&](int x, int y) { hit += out.at(x, y) != 0; });
      if (static_cast<double>(removed + hit) <= limit) {
        s.for_each_pixel(out, [&](int x, int y) { out.at(x, y) = 0; });
        removed += hit;
        break;
      }
      s.size *= 0.5;
      if (s.size < 0.5) break;
    }
  }
  return out;
}

MaskSet cutout_masks(const MaskSet& masks, const RandomizationConfig& cfg, Rng& rng) {
  MaskSet out;
  const double a_gripper = sample_cutout_amount(cfg, rng);
  out.gripper = cutout_mask(masks.gripper, a_gripper, cfg, rng);
  const double a_target = sample_cutout_amount(cfg, rng);
  out.target = cutout_mask(masks.target, a_target, cfg, rng);
  return out;
}

}  // namespace graspsim
