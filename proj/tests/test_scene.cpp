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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "graspsim/errors.hpp"
#include "graspsim/scene.hpp"

using namespace graspsim;

namespace {

SceneState fresh_scene(std::uint64_t seed, SceneConfig cfg = {}) {
  Rng rng(seed);
  return reset(cfg, rng);
}

double max_pairwise(const std::vector<Vec3>& pts) {
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, (pts[i] - pts[j]).squaredNorm());
  return std::sqrt(best);
}

// Capture-box containment from explicit box axes: opening axis along the
// yawed x, tool axis leaning by the tilt out of the vertical.
bool oracle_in_box(const SceneState& s, const Vec3& q) {
  const double cy = std::cos(s.gripper.yaw_rad), sy = std::sin(s.gripper.yaw_rad);
  const double ct = std::cos(s.gripper.tilt_rad), st = std::sin(s.gripper.tilt_rad);
  const Vec3 ex(cy, sy, 0.0);
  const Vec3 ey_body(0.0, ct, -st), ez_body(0.0, st, ct);
  const Vec3 ey(cy * ey_body.x() - sy * ey_body.y(), sy * ey_body.x() + cy * ey_body.y(), ey_body.z());
  const Vec3 ez(cy * ez_body.x() - sy * ez_body.y(), sy * ez_body.x() + cy * ez_body.y(), ez_body.z());
  const Vec3 d = q - s.gripper.position_mm;
  const Vec3& box = s.config.jaw_capture_mm;
  return std::abs(d.dot(ex)) <= box.x() / 2 && std::abs(d.dot(ey)) <= box.y() / 2 &&
         std::abs(d.dot(ez)) <= box.z() / 2;
}

Command cmd(double x, double y, double z, double yaw, double jaw) { return {{x, y, z, yaw, jaw}}; }

}  // namespace

TEST_CASE("reset is deterministic per seed") {
  const SceneState a = fresh_scene(42), b = fresh_scene(42), c = fresh_scene(43);
  CHECK(a.gripper.position_mm == b.gripper.position_mm);
  CHECK(a.target.kind == b.target.kind);
  CHECK(a.target.surface_points_mm == b.target.surface_points_mm);
  CHECK(a.target.pose.translation() == b.target.pose.translation());
  CHECK(a.gripper.position_mm != c.gripper.position_mm);
}

TEST_CASE("reset places everything inside the workspace with the jaw open") {
  SceneConfig cfg;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const SceneState s = fresh_scene(seed, cfg);
    CHECK(s.gripper.jaw_open);
    CHECK_FALSE(s.held);
    CHECK(cfg.workspace.contains(s.gripper.position_mm));
    CHECK(cfg.gripper_region.contains(s.gripper.position_mm));
    CHECK(cfg.object_region.contains(s.target.pose.translation()));
    CHECK(s.gripper.tilt_rad == doctest::Approx(deg_to_rad(45.0)));
  }
}

TEST_CASE("object kind frequencies follow the configured mix") {
  SceneConfig cfg;
  cfg.surface_spacing_mm = 2.0;  // cheap geometry; kinds only depend on the first draw
  int counts[4] = {};
  const int n = 10000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<int>(fresh_scene(1000 + i, cfg).target.kind)];
  CHECK(std::abs(counts[0] / double(n) - 0.50) <= 0.02);
  CHECK(std::abs(counts[1] / double(n) - 0.25) <= 0.02);
  CHECK(std::abs(counts[2] / double(n) - 0.25) <= 0.02);
  CHECK(counts[3] == 0);
}

TEST_CASE("reset rejects bad configurations") {
  Rng rng(1);
  SceneConfig cfg;
  cfg.workspace.max_mm.x() = 0.0;
  CHECK_THROWS_AS(reset(cfg, rng), ConfigError);
  cfg = SceneConfig{};
  cfg.object_mix = {0.5, 0.5, 0.5, 0.0};
  CHECK_THROWS_AS(reset(cfg, rng), ConfigError);
  cfg = SceneConfig{};
  cfg.object_region.max_mm.z() = 150.0;
  CHECK_THROWS_AS(reset(cfg, rng), ConfigError);
}

TEST_CASE("idle command leaves the pose unchanged") {
  const SceneState s = fresh_scene(3);
  const ActuationResult r = apply_action(s, Command::idle());
  CHECK(r.state.gripper.position_mm == s.gripper.position_mm);
  CHECK(r.state.gripper.yaw_rad == s.gripper.yaw_rad);
  CHECK(r.state.gripper.jaw_open);
  CHECK_FALSE(r.clamped);
  CHECK_FALSE(r.jaw_closed);
}

TEST_CASE("unit command moves exactly one step") {
  SceneState s = fresh_scene(3);
  s.gripper.position_mm = Vec3(50.0, 50.0, 50.0);
  const ActuationResult r = apply_action(s, cmd(1, 0, 0, 0, 1));
  CHECK(r.state.gripper.position_mm == Vec3(55.0, 50.0, 50.0));
  const ActuationResult r2 = apply_action(s, cmd(-0.3, 0.5, -1, 0, 1));
  CHECK((r2.state.gripper.position_mm - Vec3(48.5, 52.5, 45.0)).norm() < 1e-12);
  const ActuationResult r3 = apply_action(s, cmd(0, 0, 0, 1, 1));
  CHECK(r3.state.gripper.yaw_rad == doctest::Approx(deg_to_rad(10.0)));
}

TEST_CASE("desired positions outside the workspace are clamped") {
  SceneState s = fresh_scene(3);
  s.gripper.position_mm = Vec3(98.0, 50.0, 1.0);
  const ActuationResult r = apply_action(s, cmd(1, 0, 0, 0, 1));
  CHECK(r.state.gripper.position_mm == Vec3(100.0, 50.0, 1.0));
  CHECK(r.clamped);
  const ActuationResult r2 = apply_action(s, cmd(0, 0, -1, 0, 1));
  CHECK(r2.state.gripper.position_mm.z() == 0.0);
  CHECK(r2.clamped);
}

TEST_CASE("out-of-range commands are rejected") {
  const SceneState s = fresh_scene(3);
  CHECK_THROWS_AS(apply_action(s, cmd(1.01, 0, 0, 0, 1)), ValidationError);
  CHECK_THROWS_AS(apply_action(s, cmd(0, 0, 0, 0, -2)), ValidationError);
  CHECK_THROWS_AS(apply_action(s, cmd(NAN, 0, 0, 0, 1)), ValidationError);
}

TEST_CASE("gripper stays inside the workspace under random commands") {
  Rng rng(77);
  for (int ep = 0; ep < 50; ++ep) {
    SceneState s = fresh_scene(ep);
    for (int t = 0; t < 80; ++t) {
      Command c;
      for (double& v : c.v) v = rng.uniform(-1.0, 1.0);
      const ActuationResult r = apply_action(s, c);
      const ActuationResult again = apply_action(s, c);
      REQUIRE(r.state.gripper.position_mm == again.state.gripper.position_mm);
      REQUIRE(s.config.workspace.contains(r.state.gripper.position_mm));
      REQUIRE(r.state.gripper.yaw_rad > -kPi - 1e-12);
      REQUIRE(r.state.gripper.yaw_rad <= kPi + 1e-12);
      s = r.state;
    }
  }
}

TEST_CASE("jaw follows the sign of the fifth element") {
  SceneState s = fresh_scene(8);
  s.gripper.position_mm = Vec3(10.0, 10.0, 90.0);  // far from the target
  ActuationResult r = apply_action(s, cmd(0, 0, 0, 0, 0));
  CHECK_FALSE(r.state.gripper.jaw_open);
  CHECK(r.jaw_closed);
  CHECK_FALSE(r.grasp_ok);
  r = apply_action(r.state, cmd(0, 0, 0, 0, -0.5));
  CHECK_FALSE(r.jaw_closed);  // already closed
  r = apply_action(r.state, cmd(0, 0, 0, 0, 0.01));
  CHECK(r.state.gripper.jaw_open);
}

TEST_CASE("closure around a centred object grasps it") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    SceneState s = fresh_scene(seed);
    s.gripper.position_mm = s.target.pose.translation();
    if (s.target.kind == ObjectKind::Needle) {
      // The needle's mean lies off the wire; aim at a wire point instead.
      const Vec3 wire = s.target.pose.transform(s.target.surface_points_mm.front());
      s.gripper.position_mm = wire;
    }
    const ActuationResult r = apply_action(s, cmd(0, 0, 0, 0, -1));
    CHECK(r.grasp_ok);
    CHECK(r.state.held);
  }
}

TEST_CASE("closure 30 mm away misses") {
  SceneState s = fresh_scene(4);
  s.gripper.position_mm = s.target.pose.translation() + Vec3(0.0, 0.0, 30.0);
  if (!s.config.workspace.contains(s.gripper.position_mm)) s.gripper.position_mm.z() -= 60.0;
  const ActuationResult r = apply_action(s, cmd(0, 0, 0, 0, -1));
  CHECK(r.jaw_closed);
  CHECK_FALSE(r.grasp_ok);
  CHECK_FALSE(check_grasp(r.state));
}

TEST_CASE("grasp outcome matches brute-force box containment over an offset sweep") {
  int hits = 0, misses = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    SceneState base = fresh_scene(seed);
    base.gripper.yaw_rad = 0.35 * static_cast<double>(seed) - 0.9;
    const Vec3 centre = base.target.pose.translation();
    const auto world = base.target.world_points();
    for (double dx = -14; dx <= 14; dx += 3.5) {
      for (double dy = -14; dy <= 14; dy += 3.5) {
        for (double dz = -14; dz <= 14; dz += 3.5) {
          SceneState s = base;
          s.gripper.position_mm = centre + Vec3(dx, dy, dz);
          const bool want = std::any_of(world.begin(), world.end(), [&](const Vec3& q) { return oracle_in_box(s, q); });
          CHECK(check_grasp(s) == want);
          (want ? hits : misses)++;
        }
      }
    }
  }
  CHECK(hits > 50);
  CHECK(misses > 50);
}

TEST_CASE("a held object moves rigidly with the gripper") {
  SceneState s = fresh_scene(12);
  s.gripper.position_mm = Vec3(50.0, 50.0, 50.0);
  s.target.pose = Pose(rot_z(0.4), Vec3(50.0, 50.0, 50.0));
  ActuationResult r = apply_action(s, cmd(0, 0, 0, 0, -1));
  REQUIRE(r.grasp_ok);
  s = r.state;
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto before = s.target.world_points();
    const Pose body_before = s.gripper_body_pose();
    const Command c = cmd(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), -1);
    r = apply_action(s, c);
    const Pose delta = compose(r.state.gripper_body_pose(), body_before.inverse());
    const auto after = r.state.target.world_points();
    for (std::size_t i = 0; i < before.size(); i += 97) CHECK((delta.transform(before[i]) - after[i]).norm() < 1e-9);
    s = r.state;
  }
  // Opening releases it; further motion leaves it in place.
  r = apply_action(s, cmd(0, 0, 0, 0, 1));
  CHECK_FALSE(r.state.held);
  const Vec3 rest = r.state.target.pose.translation();
  r = apply_action(r.state, cmd(1, 1, 1, 0, 1));
  CHECK(r.state.target.pose.translation() == rest);
}

TEST_CASE("spawned objects: sizes, sample counts, scaling") {
  SceneConfig cfg;
  cfg.object_scale_max = 2.0;
  for (ObjectKind kind : kAllObjectKinds) {
    Rng a(21), b(21);
    const ObjectModel one = spawn_object(kind, 1.0, cfg, a);
    const ObjectModel two = spawn_object(kind, 2.0, cfg, b);
    CHECK(one.surface_points_mm.size() >= 2000);
    REQUIRE(one.surface_points_mm.size() == two.surface_points_mm.size());
    Vec3 mean = Vec3::Zero();
    double radius = 0.0;
    for (std::size_t i = 0; i < one.surface_points_mm.size(); ++i) {
      CHECK(two.surface_points_mm[i] == 2.0 * one.surface_points_mm[i]);
      mean += one.surface_points_mm[i];
      radius = std::max(radius, one.surface_points_mm[i].norm());
    }
    CHECK((mean / one.surface_points_mm.size()).norm() < 1e-9);
    CHECK(radius <= 25.0);  // fits the 50 mm ball
  }
  Rng rng(2);
  const ObjectModel needle = spawn_object(ObjectKind::Needle, 1.0, SceneConfig{}, rng);
  CHECK(max_pairwise(needle.surface_points_mm) == doctest::Approx(20.0).epsilon(0.025));
}

TEST_CASE("spawn rejects out-of-range scales and unknown names") {
  Rng rng(1);
  CHECK_THROWS_AS(spawn_object(ObjectKind::Block, 1.5, SceneConfig{}, rng), ValidationError);
  CHECK_THROWS_AS(spawn_object(ObjectKind::Block, 0.0, SceneConfig{}, rng), ValidationError);
  CHECK_THROWS_AS(object_kind_from_string("cube"), ValidationError);
  for (ObjectKind k : kAllObjectKinds) CHECK(object_kind_from_string(to_string(k)) == k);
}

TEST_CASE("workspace helpers") {
  const Workspace w;
  CHECK(w.contains(Vec3(0, 0, 0)));
  CHECK(w.contains(Vec3(100, 100, 100)));
  CHECK_FALSE(w.contains(Vec3(100.001, 0, 0)));
  CHECK(w.clamp(Vec3(-5, 50, 120)) == Vec3(0, 50, 100));
  const Workspace big = w.inflated(0.1);
  CHECK(big.min_mm == Vec3(-10, -10, -10));
  CHECK(big.max_mm == Vec3(110, 110, 110));
  CHECK_THROWS_AS(Workspace({Vec3(0, 0, 0), Vec3(1, 0, 1)}).validate(), ConfigError);
}
