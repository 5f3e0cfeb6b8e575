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

#include "graspsim/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "graspsim/errors.hpp"

namespace graspsim {

namespace {

constexpr std::size_t kMinSurfacePoints = 2000;

// Needle: semicircular arc whose outer surface spans a 20 mm chord.
constexpr double kNeedleTubeRadius = 1.0;
constexpr double kNeedleArcRadius = 10.0 - kNeedleTubeRadius;
constexpr double kBlockHalf = 5.0;
constexpr double kRodRadius = 2.0;
constexpr double kRodLength = 20.0;

// Tool dimensions in the jaw frame (x: opening, y: thickness, z: tool axis).
constexpr double kJawLength = 10.0;
constexpr double kJawThickness = 1.0;
constexpr double kJawOpenGap = 8.0;
constexpr double kJawClosedGap = 1.0;
constexpr double kClevisLength = 3.0;
constexpr double kShaftRadius = 2.5;
constexpr double kShaftLength = 20.0;

class SurfaceSampler {
 public:
  SurfaceSampler(double spacing, double jitter, Rng* rng)
      : spacing_(spacing), jitter_(jitter), rng_(rng) {}

  std::vector<Vec3>& points() { return points_; }

  // Box with the given centre, half extents and orientation.
  void box(const Vec3& center, const Vec3& half, const Mat3& rot = Mat3::Identity()) {
    for (int axis = 0; axis < 3; ++axis) {
      const int u = (axis + 1) % 3;
      const int v = (axis + 2) % 3;
      for (double side : {-1.0, 1.0}) {
        grid(2.0 * half[u], 2.0 * half[v], [&](double a, double b) {
          Vec3 local;
          local[axis] = side * half[axis];
          local[u] = a - half[u];
          local[v] = b - half[v];
          points_.push_back(center + rot * local);
        });
      }
    }
  }

  // Closed cylinder along the local z axis from base, length and radius.
  void cylinder(const Vec3& base, double radius, double length, const Mat3& rot = Mat3::Identity()) {
    const double circumference = 2.0 * kPi * radius;
    grid(circumference, length, [&](double a, double b) {
      const double ang = a / radius;
      points_.push_back(base + rot * Vec3(radius * std::cos(ang), radius * std::sin(ang), b));
    });
    disk(base, radius, rot);
    disk(base + rot * Vec3(0.0, 0.0, length), radius, rot);
  }

  // Disk in the local xy plane.
  void disk(const Vec3& center, double radius, const Mat3& rot) {
    const int rings = std::max(1, static_cast<int>(std::ceil(radius / spacing_)));
    for (int k = 0; k < rings; ++k) {
      const double rho = (k + 0.5) * radius / rings;
      const int count = std::max(3, static_cast<int>(std::ceil(2.0 * kPi * rho / spacing_)));
      for (int i = 0; i < count; ++i) {
        const double ang = (i + 0.5 + jit()) * 2.0 * kPi / count;
        points_.push_back(center + rot * Vec3(rho * std::cos(ang), rho * std::sin(ang), 0.0));
      }
    }
  }

  // Half torus in the xy plane (arc angle 0..pi) with capped ends.
  void half_torus(double arc_radius, double tube_radius) {
    const double outer_length = kPi * (arc_radius + tube_radius);
    const double tube_circ = 2.0 * kPi * tube_radius;
    grid(outer_length, tube_circ, [&](double a, double b) {
      const double phi = a / (arc_radius + tube_radius);
      const double psi = b / tube_radius;
      const double rr = arc_radius + tube_radius * std::cos(psi);
      points_.push_back(Vec3(rr * std::cos(phi), rr * std::sin(phi), tube_radius * std::sin(psi)));
    });
    for (double phi : {0.0, kPi}) {
      // Cap plane spanned by the radial direction and z.
      Mat3 rot;
      rot.col(0) = Vec3(std::cos(phi), std::sin(phi), 0.0);
      rot.col(1) = Vec3(0.0, 0.0, 1.0);
      rot.col(2) = rot.col(0).cross(rot.col(1));
      disk(Vec3(arc_radius * std::cos(phi), arc_radius * std::sin(phi), 0.0), tube_radius, rot);
    }
  }

  // Fibonacci lattice on a sphere.
  void sphere(double radius) {
    const double area = 4.0 * kPi * radius * radius;
    const int count = std::max(1, static_cast<int>(std::ceil(area / (spacing_ * spacing_))));
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double ang = golden * i;
      points_.push_back(radius * Vec3(r * std::cos(ang), r * std::sin(ang), z));
    }
  }

 private:
  template <typename Fn>
  void grid(double len_u, double len_v, Fn&& emit) {
    const int nu = std::max(1, static_cast<int>(std::ceil(len_u / spacing_)));
    const int nv = std::max(1, static_cast<int>(std::ceil(len_v / spacing_)));
    const double du = len_u / nu, dv = len_v / nv;
    for (int i = 0; i < nu; ++i) {
      for (int j = 0; j < nv; ++j) {
        emit((i + 0.5 + jit()) * du, (j + 0.5 + jit()) * dv);
      }
    }
  }

  double jit() { return rng_ && jitter_ > 0.0 ? rng_->uniform(-jitter_, jitter_) : 0.0; }

  double spacing_;
  double jitter_;
  Rng* rng_;
  std::vector<Vec3> points_;
};

std::vector<Vec3> sample_primitive(ObjectKind kind, const SceneConfig& cfg, double spacing,
                                   Rng& rng) {
  SurfaceSampler s(spacing, 0.25, &rng);
  switch (kind) {
    case ObjectKind::Needle:
      s.half_torus(kNeedleArcRadius, kNeedleTubeRadius);
      break;
    case ObjectKind::Block:
      s.box(Vec3::Zero(), Vec3::Constant(kBlockHalf));
      break;
    case ObjectKind::Rod:
      // Lying along local x.
      s.cylinder(Vec3(-0.5 * kRodLength, 0.0, 0.0), kRodRadius, kRodLength, rot_y(kPi / 2.0));
      break;
    case ObjectKind::Sphere:
      s.sphere(cfg.sphere_radius_mm);
      break;
  }
  return std::move(s.points());
}

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  return a <= -kPi ? a + 2.0 * kPi : a;
}

Vec3 sample_in(const Workspace& box, Rng& rng) {
  return Vec3(rng.uniform(box.min_mm.x(), box.max_mm.x()),
              rng.uniform(box.min_mm.y(), box.max_mm.y()),
              rng.uniform(box.min_mm.z(), box.max_mm.z()));
}

}  // namespace

void Workspace::validate() const {
  if (!min_mm.allFinite() || !max_mm.allFinite() || (min_mm.array() >= max_mm.array()).any()) {
    throw ConfigError("workspace: min must be strictly below max on every axis");
  }
}

bool Workspace::contains(const Vec3& q) const {
  return (q.array() >= min_mm.array()).all() && (q.array() <= max_mm.array()).all();
}

Vec3 Workspace::clamp(const Vec3& q) const { return q.cwiseMax(min_mm).cwiseMin(max_mm); }

Workspace Workspace::inflated(double fraction) const {
  const Vec3 pad = fraction * extent();
  return {min_mm - pad, max_mm + pad};
}

std::string_view to_string(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::Needle: return "needle";
    case ObjectKind::Block: return "block";
    case ObjectKind::Rod: return "rod";
    case ObjectKind::Sphere: return "sphere";
  }
  return "unknown";
}

ObjectKind object_kind_from_string(std::string_view name) {
  for (ObjectKind k : kAllObjectKinds) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown object kind: " + std::string(name));
}

void SceneConfig::validate() const {
  workspace.validate();
  object_region.validate();
  gripper_region.validate();
  if (!workspace.contains(object_region.min_mm) || !workspace.contains(object_region.max_mm) ||
      !workspace.contains(gripper_region.min_mm) || !workspace.contains(gripper_region.max_mm)) {
    throw ConfigError("scene: placement regions must lie inside the workspace");
  }
  if (!(step_translation_mm > 0.0) || !(step_rotation_rad >= 0.0)) {
    throw ConfigError("scene: step magnitudes must be positive");
  }
  double total = 0.0;
  for (double p : object_mix) {
    if (!(p >= 0.0)) throw ConfigError("scene: object probabilities must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("scene: object mix must sum to 1");
  if (!(object_scale_min > 0.0) || object_scale_max < object_scale_min) {
    throw ConfigError("scene: invalid object scale range");
  }
  if (!(sphere_radius_mm > 0.0) || sphere_radius_mm > 25.0) {
    throw ConfigError("scene: sphere radius must be in (0, 25] mm");
  }
  if ((jaw_capture_mm.array() <= 0.0).any()) throw ConfigError("scene: jaw capture box must be positive");
  if (!(surface_spacing_mm > 0.0)) throw ConfigError("scene: surface spacing must be positive");
}

void Command::validate() const {
  for (double x : v) {
    if (!std::isfinite(x) || x < -1.0 || x > 1.0) {
      throw ValidationError("command elements must lie in [-1, 1]");
    }
  }
}

std::shared_ptr<const GripperGeometry> make_gripper_geometry(double tilt_rad, double spacing_mm) {
  auto geo = std::make_shared<GripperGeometry>();
  geo->tilt_rad = tilt_rad;
  // Negative rotation about x leans the tool axis towards +y, away from the
  // default camera, so the jaws face the lens.
  geo->jaw_rotation = rot_x(-tilt_rad);
  const Mat3& jr = geo->jaw_rotation;

  auto build = [&](double gap) {
    SurfaceSampler s(spacing_mm, 0.0, nullptr);
    const double plate_x = 0.5 * gap + 0.5 * kJawThickness;
    const Vec3 plate_half(0.5 * kJawThickness, 2.0, 0.5 * kJawLength);
    s.box(jr * Vec3(plate_x, 0.0, 0.0), plate_half, jr);
    s.box(jr * Vec3(-plate_x, 0.0, 0.0), plate_half, jr);
    const double clevis_mid = 0.5 * kJawLength + 0.5 * kClevisLength;
    s.box(jr * Vec3(0.0, 0.0, clevis_mid), Vec3(5.0, 2.5, 0.5 * kClevisLength), jr);
    const Vec3 shaft_base = jr * Vec3(0.0, 0.0, 0.5 * kJawLength + kClevisLength);
    s.cylinder(shaft_base, kShaftRadius, kShaftLength);
    return std::move(s.points());
  };
  geo->open_points = build(kJawOpenGap);
  geo->closed_points = build(kJawClosedGap);
  return geo;
}

std::vector<Vec3> ObjectModel::world_points() const {
  std::vector<Vec3> out;
  out.reserve(surface_points_mm.size());
  for (const Vec3& p : surface_points_mm) out.push_back(pose.transform(p));
  return out;
}

Pose SceneState::gripper_body_pose() const {
  return Pose(rot_z(gripper.yaw_rad), gripper.position_mm);
}

std::vector<Vec3> SceneState::gripper_world_points() const {
  const auto& local = gripper.jaw_open ? gripper_geometry->open_points
                                       : gripper_geometry->closed_points;
  const Pose body = gripper_body_pose();
  std::vector<Vec3> out;
  out.reserve(local.size());
  for (const Vec3& p : local) out.push_back(body.transform(p));
  return out;
}

ObjectModel spawn_object(ObjectKind kind, double scale, const SceneConfig& cfg, Rng& rng) {
  if (!(scale > 0.0) || scale < cfg.object_scale_min - 1e-12 ||
      scale > cfg.object_scale_max + 1e-12) {
    throw ValidationError("spawn_object: scale outside configured range");
  }
  double spacing = cfg.surface_spacing_mm;
  std::vector<Vec3> pts = sample_primitive(kind, cfg, spacing, rng);
  while (pts.size() < kMinSurfacePoints) {
    spacing *= 0.7;
    pts = sample_primitive(kind, cfg, spacing, rng);
  }
  Vec3 mean = Vec3::Zero();
  for (const Vec3& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  for (Vec3& p : pts) p = scale * (p - mean);

  ObjectModel obj;
  obj.kind = kind;
  obj.scale = scale;
  obj.surface_points_mm = std::move(pts);
  return obj;
}

SceneState reset(const SceneConfig& cfg, Rng& rng) {
  cfg.validate();
  SceneState s;
  s.config = cfg;

  const double u = rng.canonical();
  double cumulative = 0.0;
  ObjectKind kind = ObjectKind::Needle;
  for (std::size_t i = 0; i < kAllObjectKinds.size(); ++i) {
    if (cfg.object_mix[i] <= 0.0) continue;
    kind = kAllObjectKinds[i];
    cumulative += cfg.object_mix[i];
    if (u < cumulative) break;
  }
  const double scale = rng.uniform(cfg.object_scale_min, cfg.object_scale_max);
  const double object_yaw = rng.uniform(-kPi, kPi);
  const Vec3 object_pos = sample_in(cfg.object_region, rng);
  s.target = spawn_object(kind, scale, cfg, rng);
  s.target.pose = Pose(rot_z(object_yaw), object_pos);

  s.gripper.position_mm = sample_in(cfg.gripper_region, rng);
  s.gripper.yaw_rad = rng.uniform(-cfg.gripper_yaw_range_rad, cfg.gripper_yaw_range_rad);
  s.gripper.jaw_open = true;
  s.gripper.tilt_rad = cfg.gripper_tilt_rad;
  s.gripper_geometry = make_gripper_geometry(cfg.gripper_tilt_rad, cfg.surface_spacing_mm);
  return s;
}

bool in_capture_volume(const SceneState& state, const Vec3& world_point) {
  const Mat3 to_jaw =
      (rot_z(state.gripper.yaw_rad) * state.gripper_geometry->jaw_rotation).transpose();
  const Vec3 local = to_jaw * (world_point - state.gripper.position_mm);
  const Vec3 half = 0.5 * state.config.jaw_capture_mm;
  return (local.cwiseAbs().array() <= half.array()).all();
}

bool check_grasp(const SceneState& state) {
  const Pose& pose = state.target.pose;
  return std::any_of(state.target.surface_points_mm.begin(), state.target.surface_points_mm.end(),
                     [&](const Vec3& p) { return in_capture_volume(state, pose.transform(p)); });
}

ActuationResult apply_action(const SceneState& state, const Command& cmd) {
  cmd.validate();
  ActuationResult r{state};
  SceneState& s = r.state;
  const double step = s.config.step_translation_mm;
  const Vec3 desired = s.gripper.position_mm + step * Vec3(cmd.v[0], cmd.v[1], cmd.v[2]);
  s.gripper.position_mm = s.config.workspace.clamp(desired);
  r.clamped = s.gripper.position_mm != desired;
  s.gripper.yaw_rad = wrap_angle(s.gripper.yaw_rad + cmd.v[3] * s.config.step_rotation_rad);

  const bool open_next = cmd.opens_jaw();
  r.jaw_closed = s.gripper.jaw_open && !open_next;
  s.gripper.jaw_open = open_next;

  if (s.held) {
    if (open_next) {
      s.held = false;
    } else {
      s.target.pose = compose(s.gripper_body_pose(), s.held_in_gripper);
    }
  }
  if (r.jaw_closed && !s.held) {
    r.grasp_ok = check_grasp(s);
    if (r.grasp_ok) {
      s.held = true;
      s.held_in_gripper = compose(s.gripper_body_pose().inverse(), s.target.pose);
    }
  }
  return r;
}

}  // namespace graspsim
