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

#include <cmath>

#include "doctest.h"
#include "graspsim/errors.hpp"
#include "graspsim/randomization.hpp"

using namespace graspsim;

namespace {

constexpr int kDraws = 10000;

std::size_t count_set(const Gray8& g) {
  std::size_t n = 0;
  for (auto v : g.data()) n += v != 0;
  return n;
}

Gray8 disc_mask(int w, int h, double cx, double cy, double r) {
  Gray8 m(w, h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) m.at(x, y) = 1;
  return m;
}

DepthImage blob_depth(Rng& rng) {
  DepthImage d(80, 60, 0.0);
  for (int y = 10; y < 50; ++y)
    for (int x = 15; x < 70; ++x) d.at(x, y) = 100.0 + 30.0 * rng.canonical();
  return d;
}

}  // namespace

TEST_CASE("camera noise stays in range and is seed-determined") {
  const RandomizationConfig cfg;
  Rng rng(1);
  for (int i = 0; i < kDraws; ++i) {
    const CameraNoise n = sample_camera_noise(cfg, rng);
    REQUIRE(std::abs(n.roll_rad) <= deg_to_rad(3.0));
    REQUIRE(std::abs(n.pitch_rad) <= deg_to_rad(3.0));
    REQUIRE(std::abs(n.yaw_rad) <= deg_to_rad(1.0));
    REQUIRE(std::abs(n.distance_mm) <= 10.0);
  }
  Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) REQUIRE(sample_camera_noise(cfg, a) == sample_camera_noise(cfg, b));
}

TEST_CASE("moving camera walk stays in range") {
  const RandomizationConfig cfg;
  Rng rng(2);
  CameraNoise n = sample_camera_noise(cfg, rng);
  for (int i = 0; i < kDraws; ++i) {
    const CameraNoise next = step_camera_noise(n, cfg, rng);
    REQUIRE(std::abs(next.roll_rad) <= deg_to_rad(3.0));
    REQUIRE(std::abs(next.yaw_rad) <= deg_to_rad(1.0));
    REQUIRE(std::abs(next.distance_mm) <= 10.0);
    REQUIRE(std::abs(next.distance_mm - n.distance_mm) <= 0.1 * 10.0 + 1e-12);
    n = next;
  }
}

TEST_CASE("camera noise application") {
  const Vec3 look_at(50, 50, 50);
  const CameraModel nominal = look_at_camera(look_at, 150.0, deg_to_rad(20.0), CameraModel{});
  const CameraModel same = apply_camera_noise(nominal, look_at, CameraNoise{});
  CHECK((same.pose.rotation() - nominal.pose.rotation()).norm() < 1e-15);
  CHECK((same.pose.translation() - nominal.pose.translation()).norm() < 1e-12);

  const CameraModel far = apply_camera_noise(nominal, look_at, CameraNoise{0, 0, 0, 7.5});
  const Vec3 s0 = nominal.pose.translation() - look_at, s1 = far.pose.translation() - look_at;
  CHECK(s1.norm() == doctest::Approx(s0.norm() + 7.5));
  CHECK(s1.normalized().dot(s0.normalized()) == doctest::Approx(1.0));

  const CameraNoise tilt{deg_to_rad(2.0), deg_to_rad(-1.0), deg_to_rad(0.5), 0.0};
  const CameraModel rotated = apply_camera_noise(nominal, look_at, tilt);
  const Mat3 delta = rotated.pose.rotation() * nominal.pose.rotation().transpose();
  const Mat3 want = rot_z(tilt.yaw_rad) * rot_y(tilt.pitch_rad) * rot_x(tilt.roll_rad);
  CHECK((delta - want).norm() < 1e-12);
  CHECK((rotated.pose.translation() - nominal.pose.translation()).norm() < 1e-12);
}

TEST_CASE("object scale range and mean") {
  const RandomizationConfig cfg;
  Rng rng(3);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double s = sample_object_scale(cfg, rng);
    REQUIRE(s >= 0.75);
    REQUIRE(s <= 1.25);
    sum += s;
  }
  CHECK(std::abs(sum / 100000 - 1.0) <= 0.01);
}

TEST_CASE("action noise bounds and zero-noise identity") {
  RandomizationConfig cfg;
  Rng rng(4);
  for (int i = 0; i < kDraws; ++i) {
    const Command c{{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), 1.0}};
    const Command p = perturb_action(c, cfg, rng);
    for (std::size_t k = 0; k < 3; ++k) {
      REQUIRE(std::abs(p.v[k] - c.v[k]) <= 0.01 + 1e-15);
      REQUIRE(std::abs(p.v[k]) <= 1.0);
    }
    REQUIRE(p.v[3] == c.v[3]);
    REQUIRE(p.v[4] == c.v[4]);
  }
  cfg.action_noise = 0.0;
  const Command c{{0.3, -0.2, 1.0, 0.5, -1.0}};
  CHECK(perturb_action(c, cfg, rng) == c);
}

TEST_CASE("depth corruption") {
  Rng rng(5);
  const DepthImage clean = blob_depth(rng);

  RandomizationConfig off;
  off.depth_noise_range = 0.0;
  off.blur_kernel = 1;
  CHECK(corrupt_depth(clean, off, rng) == clean);

  RandomizationConfig noise_only;
  noise_only.blur_kernel = 1;
  const DepthImage noisy = corrupt_depth(clean, noise_only, rng);
  double lo = 1e9, hi = -1e9;
  for (double d : clean.data())
    if (d > 0.0) lo = std::min(lo, d), hi = std::max(hi, d);
  for (int y = 0; y < clean.height(); ++y)
    for (int x = 0; x < clean.width(); ++x) {
      if (clean.at(x, y) == 0.0) {
        REQUIRE(noisy.at(x, y) == 0.0);
      } else {
        REQUIRE(std::abs(noisy.at(x, y) - clean.at(x, y)) <= 0.005 * (hi - lo) + 1e-9);
      }
    }

  // Blur keeps a constant region constant, including its edge next to no-hit pixels.
  DepthImage flat(40, 40, 0.0);
  for (int y = 5; y < 30; ++y)
    for (int x = 8; x < 33; ++x) flat.at(x, y) = 123.25;
  RandomizationConfig blur_only;
  blur_only.depth_noise_range = 0.0;
  const DepthImage blurred = corrupt_depth(flat, blur_only, rng);
  for (int i = 0; i < 1600; ++i) REQUIRE(blurred.data()[i] == doctest::Approx(flat.data()[i]).epsilon(1e-14));

  // Full corruption stays within the noise band around the local range.
  const RandomizationConfig def;
  const DepthImage full = corrupt_depth(clean, def, rng);
  for (int i = 0; i < static_cast<int>(clean.data().size()); ++i) {
    if (clean.data()[i] == 0.0) REQUIRE(full.data()[i] == 0.0);
    else REQUIRE(full.data()[i] >= lo - 0.005 * (hi - lo) - 1e-9);
  }
  const DepthImage empty(10, 10, 0.0);
  CHECK(corrupt_depth(empty, def, rng) == empty);
}

TEST_CASE("cutouts remove the sampled fraction and never add pixels") {
  const RandomizationConfig cfg;
  Rng rng(6);
  const Gray8 mask = disc_mask(120, 100, 60, 50, 30);
  const std::size_t area = count_set(mask);
  CHECK(cutout_mask(mask, 0.0, cfg, rng) == mask);
  for (int i = 0; i < 2000; ++i) {
    const double amount = sample_cutout_amount(cfg, rng);
    REQUIRE(amount >= 0.0);
    REQUIRE(amount <= 0.2);
    const Gray8 cut = cutout_mask(mask, amount, cfg, rng);
    for (std::size_t k = 0; k < mask.data().size(); ++k) REQUIRE(cut.data()[k] <= mask.data()[k]);
    const double removed = static_cast<double>(area - count_set(cut)) / static_cast<double>(area);
    REQUIRE(removed <= amount + 0.05 + 1e-12);
  }
  const Gray8 blank(20, 20, 0);
  CHECK(cutout_mask(blank, 0.2, cfg, rng) == blank);

  MaskSet set{mask, disc_mask(120, 100, 20, 20, 8)};
  const MaskSet cut = cutout_masks(set, cfg, rng);
  for (std::size_t k = 0; k < mask.data().size(); ++k) {
    REQUIRE(cut.gripper.data()[k] <= set.gripper.data()[k]);
    REQUIRE(cut.target.data()[k] <= set.target.data()[k]);
  }
}

TEST_CASE("seed replay reproduces the whole randomization trace") {
  const RandomizationConfig cfg;
  auto trace = [&](std::uint64_t seed) {
    Rng rng(seed);
    Rng depth_rng(seed + 1);
    std::vector<double> out;
    const CameraNoise n = sample_camera_noise(cfg, rng);
    out.insert(out.end(), {n.roll_rad, n.pitch_rad, n.yaw_rad, n.distance_mm});
    const CameraNoise m = step_camera_noise(n, cfg, rng);
    out.insert(out.end(), {m.roll_rad, m.distance_mm});
    out.push_back(sample_object_scale(cfg, rng));
    const Command p = perturb_action(Command{{0.5, 0.5, 0.5, 0, 1}}, cfg, rng);
    out.insert(out.end(), p.v.begin(), p.v.end());
    const DepthImage d = corrupt_depth(blob_depth(depth_rng), cfg, rng);
    out.insert(out.end(), d.data().begin(), d.data().end());
    const Gray8 c = cutout_mask(disc_mask(60, 60, 30, 30, 15), 0.15, cfg, rng);
    out.insert(out.end(), c.data().begin(), c.data().end());
    return out;
  };
  CHECK(trace(42) == trace(42));
  CHECK(trace(42) != trace(43));
}

TEST_CASE("randomization config validation") {
  RandomizationConfig c;
  CHECK_NOTHROW(c.validate());
  c.blur_kernel = 2;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = RandomizationConfig{};
  c.scale_max = 0.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = RandomizationConfig{};
  c.cam_roll_deg = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = RandomizationConfig{};
  c.cutout_max = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}
