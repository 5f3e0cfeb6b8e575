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

#ifndef GRASPSIM_SCENE_HPP_
#define GRASPSIM_SCENE_HPP_

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "graspsim/geometry.hpp"
#include "graspsim/rng.hpp"

namespace graspsim {

/// Axis-aligned box in world millimeters.
struct Workspace {
  Vec3 min_mm = Vec3(0.0, 0.0, 0.0);
  Vec3 max_mm = Vec3(100.0, 100.0, 100.0);

  /// Throws ConfigError unless min < max on every axis.
  void validate() const;
  bool contains(const Vec3& q) const;
  /// Nearest point inside the box.
  Vec3 clamp(const Vec3& q) const;
  Vec3 extent() const { return max_mm - min_mm; }
  Vec3 center() const { return 0.5 * (min_mm + max_mm); }
  /// Box grown by fraction * extent on every side.
  Workspace inflated(double fraction) const;
};

enum class ObjectKind { Needle, Block, Rod, Sphere };

inline constexpr std::array<ObjectKind, 4> kAllObjectKinds = {
    ObjectKind::Needle, ObjectKind::Block, ObjectKind::Rod, ObjectKind::Sphere};

std::string_view to_string(ObjectKind kind);
/// Throws ValidationError for unknown names.
ObjectKind object_kind_from_string(std::string_view name);

struct SceneConfig {
  Workspace workspace;
  double step_translation_mm = 5.0;            // Delta^xyz
  double step_rotation_rad = deg_to_rad(10.0);  // Delta^theta
  /// Occurrence probabilities in kAllObjectKinds order.
  std::array<double, 4> object_mix = {0.5, 0.25, 0.25, 0.0};
  double object_scale_min = 1.0;
  double object_scale_max = 1.0;
  double sphere_radius_mm = 5.0;
  /// Sampling boxes for initial placements; both must lie inside workspace.
  Workspace object_region{Vec3(15.0, 15.0, 10.0), Vec3(85.0, 85.0, 50.0)};
  Workspace gripper_region{Vec3(10.0, 10.0, 20.0), Vec3(90.0, 90.0, 80.0)};
  double gripper_yaw_range_rad = 0.0;
  double gripper_tilt_rad = deg_to_rad(45.0);
  /// Full edge lengths of the jaw capture box in the jaw frame.
  Vec3 jaw_capture_mm = Vec3(8.0, 4.0, 10.0);
  /// Target spacing between surface samples before scaling.
  double surface_spacing_mm = 0.2;

  void validate() const;
};

/**
 * 5-element normalized command: translation fractions of Delta^xyz, a yaw
 * fraction of Delta^theta, and the jaw element (positive opens).
 */
struct Command {
  std::array<double, 5> v{};

  static Command idle() { return {{0.0, 0.0, 0.0, 0.0, 1.0}}; }
  /// Throws ValidationError when an element is outside [-1, 1] or not finite.
  void validate() const;
  bool opens_jaw() const { return v[4] > 0.0; }
  bool operator==(const Command&) const = default;
};

struct GripperState {
  Vec3 position_mm = Vec3::Zero();  // centre of the jaw capture box
  double yaw_rad = 0.0;
  bool jaw_open = true;
  double tilt_rad = deg_to_rad(45.0);
};

/// Surface samples of the tool in its body frame (yaw applied, no translation).
struct GripperGeometry {
  double tilt_rad = 0.0;
  std::vector<Vec3> open_points;
  std::vector<Vec3> closed_points;
  Mat3 jaw_rotation = Mat3::Identity();  // jaw frame -> body frame
};

std::shared_ptr<const GripperGeometry> make_gripper_geometry(double tilt_rad,
                                                             double spacing_mm);

struct ObjectModel {
  ObjectKind kind = ObjectKind::Needle;
  double scale = 1.0;
  Pose pose;
  /// Local-frame samples centred on their mean, already scaled.
  std::vector<Vec3> surface_points_mm;

  std::vector<Vec3> world_points() const;
};

struct SceneState {
  SceneConfig config;
  GripperState gripper;
  std::shared_ptr<const GripperGeometry> gripper_geometry;
  ObjectModel target;
  bool held = false;
  Pose held_in_gripper;  // object pose in the gripper body frame while held

  Pose gripper_body_pose() const;
  std::vector<Vec3> gripper_world_points() const;
};

/// Samples a scene: object kind from the mix, placements inside the regions.
SceneState reset(const SceneConfig& cfg, Rng& rng);

/// Builds a primitive target. Throws ValidationError for an out-of-range
/// scale.
ObjectModel spawn_object(ObjectKind kind, double scale, const SceneConfig& cfg, Rng& rng);

struct ActuationResult {
  SceneState state;
  bool clamped = false;      // desired position left the workspace
  bool jaw_closed = false;   // open -> closed transition this step
  bool grasp_ok = false;     // closure captured the target
};

/// Moves the gripper by one command. Throws ValidationError for commands
/// outside [-1, 1].
ActuationResult apply_action(const SceneState& state, const Command& cmd);

/// True iff a target surface point lies inside the open-jaw capture box.
bool check_grasp(const SceneState& state);

/// Capture-box containment of one world point for the given gripper pose.
bool in_capture_volume(const SceneState& state, const Vec3& world_point);

}  // namespace graspsim

#endif  // GRASPSIM_SCENE_HPP_
