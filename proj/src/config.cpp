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

#include "graspsim/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "graspsim/errors.hpp"

namespace graspsim {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size() || !std::isfinite(v)) {
    throw ConfigError("config: " + key + ": expected a number, got '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size() || v < -(1L << 30) || v > (1L << 30)) {
    throw ConfigError("config: " + key + ": expected an integer, got '" + text + "'");
  }
  return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("config: " + key + ": expected a boolean, got '" + text + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& text, std::size_t n) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.size() != n) {
    throw ConfigError("config: " + key + ": expected " + std::to_string(n) + " comma-separated numbers");
  }
  return out;
}

struct Field {
  std::string section;
  std::string key;
  std::function<std::string(EvalConfig&)> get;
  std::function<void(EvalConfig&, const std::string&)> set;
};

using DoubleRef = std::function<double&(EvalConfig&)>;
using IntRef = std::function<int&(EvalConfig&)>;
using BoolRef = std::function<bool&(EvalConfig&)>;
using VecRef = std::function<Vec3&(EvalConfig&)>;

Field dbl(std::string s, std::string k, DoubleRef ref) {
  const std::string name = s + "." + k;
  return {s, k, [ref](EvalConfig& c) { return fmt_double(ref(c)); },
          [ref, name](EvalConfig& c, const std::string& v) { ref(c) = parse_double(name, v); }};
}

Field deg(std::string s, std::string k, DoubleRef ref) {
  const std::string name = s + "." + k;
  return {s, k, [ref](EvalConfig& c) { return fmt_double(rad_to_deg(ref(c))); },
          [ref, name](EvalConfig& c, const std::string& v) {
            ref(c) = deg_to_rad(parse_double(name, v));
          }};
}

Field integer(std::string s, std::string k, IntRef ref) {
  const std::string name = s + "." + k;
  return {s, k, [ref](EvalConfig& c) { return std::to_string(ref(c)); },
          [ref, name](EvalConfig& c, const std::string& v) { ref(c) = parse_int(name, v); }};
}

Field boolean(std::string s, std::string k, BoolRef ref) {
  const std::string name = s + "." + k;
  return {s, k, [ref](EvalConfig& c) { return std::string(ref(c) ? "true" : "false"); },
          [ref, name](EvalConfig& c, const std::string& v) { ref(c) = parse_bool(name, v); }};
}

Field vec3(std::string s, std::string k, VecRef ref) {
  const std::string name = s + "." + k;
  return {s, k,
          [ref](EvalConfig& c) {
            const Vec3& v = ref(c);
            return fmt_double(v.x()) + "," + fmt_double(v.y()) + "," + fmt_double(v.z());
          },
          [ref, name](EvalConfig& c, const std::string& v) {
            const auto xs = parse_list(name, v, 3);
            ref(c) = Vec3(xs[0], xs[1], xs[2]);
          }};
}

Field code(std::string s, std::string k, std::function<std::uint8_t&(EvalConfig&)> ref) {
  const std::string name = s + "." + k;
  return {s, k, [ref](EvalConfig& c) { return std::to_string(ref(c)); },
          [ref, name](EvalConfig& c, const std::string& v) {
            const int x = parse_int(name, v);
            if (x < 0 || x > 255) throw ConfigError("config: " + name + ": must be in [0, 255]");
            ref(c) = static_cast<std::uint8_t>(x);
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(boolean("harness", "randomize", [](EvalConfig& c) -> bool& { return c.randomize; }));
    f.push_back(boolean("harness", "moving_camera", [](EvalConfig& c) -> bool& { return c.moving_camera; }));
    f.push_back(boolean("harness", "use_stereo", [](EvalConfig& c) -> bool& { return c.use_stereo; }));
    f.push_back(boolean("harness", "regrasp", [](EvalConfig& c) -> bool& { return c.regrasp; }));
    f.push_back(dbl("harness", "expert_tolerance", [](EvalConfig& c) -> double& { return c.expert_tolerance; }));

    f.push_back(vec3("scene", "workspace_min", [](EvalConfig& c) -> Vec3& { return c.scene.workspace.min_mm; }));
    f.push_back(vec3("scene", "workspace_max", [](EvalConfig& c) -> Vec3& { return c.scene.workspace.max_mm; }));
    f.push_back(dbl("scene", "step_translation_mm", [](EvalConfig& c) -> double& { return c.scene.step_translation_mm; }));
    f.push_back(deg("scene", "step_rotation_deg", [](EvalConfig& c) -> double& { return c.scene.step_rotation_rad; }));
    f.push_back({"scene", "object_mix",
                 [](EvalConfig& c) {
                   std::string out;
                   for (std::size_t i = 0; i < c.scene.object_mix.size(); ++i) {
                     out += (i ? "," : "") + fmt_double(c.scene.object_mix[i]);
                   }
                   return out;
                 },
                 [](EvalConfig& c, const std::string& v) {
                   const auto xs = parse_list("scene.object_mix", v, 4);
                   for (std::size_t i = 0; i < 4; ++i) c.scene.object_mix[i] = xs[i];
                 }});
    f.push_back(dbl("scene", "object_scale_min", [](EvalConfig& c) -> double& { return c.scene.object_scale_min; }));
    f.push_back(dbl("scene", "object_scale_max", [](EvalConfig& c) -> double& { return c.scene.object_scale_max; }));
    f.push_back(dbl("scene", "sphere_radius_mm", [](EvalConfig& c) -> double& { return c.scene.sphere_radius_mm; }));
    f.push_back(vec3("scene", "object_region_min", [](EvalConfig& c) -> Vec3& { return c.scene.object_region.min_mm; }));
    f.push_back(vec3("scene", "object_region_max", [](EvalConfig& c) -> Vec3& { return c.scene.object_region.max_mm; }));
    f.push_back(vec3("scene", "gripper_region_min", [](EvalConfig& c) -> Vec3& { return c.scene.gripper_region.min_mm; }));
    f.push_back(vec3("scene", "gripper_region_max", [](EvalConfig& c) -> Vec3& { return c.scene.gripper_region.max_mm; }));
    f.push_back(deg("scene", "gripper_yaw_range_deg", [](EvalConfig& c) -> double& { return c.scene.gripper_yaw_range_rad; }));
    f.push_back(deg("scene", "gripper_tilt_deg", [](EvalConfig& c) -> double& { return c.scene.gripper_tilt_rad; }));
    f.push_back(vec3("scene", "jaw_capture_mm", [](EvalConfig& c) -> Vec3& { return c.scene.jaw_capture_mm; }));
    f.push_back(dbl("scene", "surface_spacing_mm", [](EvalConfig& c) -> double& { return c.scene.surface_spacing_mm; }));

    f.push_back(integer("task", "h_max", [](EvalConfig& c) -> int& { return c.task.h_max; }));
    f.push_back(dbl("task", "gamma", [](EvalConfig& c) -> double& { return c.task.gamma; }));
    f.push_back(dbl("task", "success_reward", [](EvalConfig& c) -> double& { return c.task.success_reward; }));
    f.push_back(dbl("task", "failure_reward", [](EvalConfig& c) -> double& { return c.task.failure_reward; }));
    f.push_back(dbl("task", "abnormal_reward", [](EvalConfig& c) -> double& { return c.task.abnormal_reward; }));
    f.push_back(dbl("task", "normal_reward", [](EvalConfig& c) -> double& { return c.task.normal_reward; }));

    f.push_back(dbl("camera", "standoff_mm", [](EvalConfig& c) -> double& { return c.camera.standoff_mm; }));
    f.push_back(dbl("camera", "tilt_deg", [](EvalConfig& c) -> double& { return c.camera.tilt_deg; }));
    f.push_back(dbl("camera", "focal_px", [](EvalConfig& c) -> double& { return c.camera.focal_px; }));
    f.push_back(dbl("camera", "baseline_mm", [](EvalConfig& c) -> double& { return c.camera.baseline_mm; }));
    f.push_back(dbl("camera", "pixel_scale_mm", [](EvalConfig& c) -> double& { return c.camera.pixel_scale_mm; }));
    f.push_back(integer("camera", "width_px", [](EvalConfig& c) -> int& { return c.camera.width_px; }));
    f.push_back(integer("camera", "height_px", [](EvalConfig& c) -> int& { return c.camera.height_px; }));

    f.push_back(integer("perception", "voxel_resolution", [](EvalConfig& c) -> int& { return c.perception.voxel_resolution; }));
    f.push_back(dbl("perception", "filter_radius_vox", [](EvalConfig& c) -> double& { return c.perception.filter_radius_vox; }));
    f.push_back(integer("perception", "filter_min_neighbors", [](EvalConfig& c) -> int& { return c.perception.filter_min_neighbors; }));
    f.push_back(boolean("perception", "ortho_top_surface", [](EvalConfig& c) -> bool& { return c.perception.ortho_top_surface; }));

    f.push_back(integer("dsa", "zoom", [](EvalConfig& c) -> int& { return c.dsa.zoom; }));
    f.push_back(code("dsa", "gripper_code", [](EvalConfig& c) -> std::uint8_t& { return c.dsa.gripper_code; }));
    f.push_back(code("dsa", "target_code", [](EvalConfig& c) -> std::uint8_t& { return c.dsa.target_code; }));
    f.push_back(integer("dsa", "state_band_rows", [](EvalConfig& c) -> int& { return c.dsa.state_band_rows; }));

    f.push_back(integer("control", "h_begin", [](EvalConfig& c) -> int& { return c.control.h_begin; }));
    f.push_back(dbl("control", "c_dis", [](EvalConfig& c) -> double& { return c.control.c_dis; }));
    f.push_back(vec3("control", "offset", [](EvalConfig& c) -> Vec3& { return c.control.offset; }));
    f.push_back(dbl("control", "k_p", [](EvalConfig& c) -> double& { return c.control.k_p; }));
    f.push_back(dbl("control", "alpha_xyz", [](EvalConfig& c) -> double& { return c.control.alpha_xyz; }));
    f.push_back(dbl("control", "alpha_theta", [](EvalConfig& c) -> double& { return c.control.alpha_theta; }));
    f.push_back(dbl("control", "z_safe_norm", [](EvalConfig& c) -> double& { return c.control.z_safe_norm; }));
    f.push_back(dbl("control", "lift_mm", [](EvalConfig& c) -> double& { return c.control.lift_mm; }));

    auto& r = f;
    r.push_back(dbl("randomization", "cam_roll_deg", [](EvalConfig& c) -> double& { return c.randomization.cam_roll_deg; }));
    r.push_back(dbl("randomization", "cam_pitch_deg", [](EvalConfig& c) -> double& { return c.randomization.cam_pitch_deg; }));
    r.push_back(dbl("randomization", "cam_yaw_deg", [](EvalConfig& c) -> double& { return c.randomization.cam_yaw_deg; }));
    r.push_back(dbl("randomization", "cam_distance_mm", [](EvalConfig& c) -> double& { return c.randomization.cam_distance_mm; }));
    r.push_back(dbl("randomization", "scale_min", [](EvalConfig& c) -> double& { return c.randomization.scale_min; }));
    r.push_back(dbl("randomization", "scale_max", [](EvalConfig& c) -> double& { return c.randomization.scale_max; }));
    r.push_back(dbl("randomization", "action_noise", [](EvalConfig& c) -> double& { return c.randomization.action_noise; }));
    r.push_back(dbl("randomization", "depth_noise_range", [](EvalConfig& c) -> double& { return c.randomization.depth_noise_range; }));
    r.push_back(integer("randomization", "blur_kernel", [](EvalConfig& c) -> int& { return c.randomization.blur_kernel; }));
    r.push_back(dbl("randomization", "blur_sigma", [](EvalConfig& c) -> double& { return c.randomization.blur_sigma; }));
    r.push_back(dbl("randomization", "cutout_min", [](EvalConfig& c) -> double& { return c.randomization.cutout_min; }));
    r.push_back(dbl("randomization", "cutout_max", [](EvalConfig& c) -> double& { return c.randomization.cutout_max; }));
    r.push_back(dbl("randomization", "cutout_size_min_px", [](EvalConfig& c) -> double& { return c.randomization.cutout_size_min_px; }));
    r.push_back(dbl("randomization", "cutout_size_max_px", [](EvalConfig& c) -> double& { return c.randomization.cutout_size_max_px; }));
    r.push_back(dbl("randomization", "cutout_overshoot", [](EvalConfig& c) -> double& { return c.randomization.cutout_overshoot; }));
    r.push_back(dbl("randomization", "moving_camera_step", [](EvalConfig& c) -> double& { return c.randomization.moving_camera_step; }));

    f.push_back(integer("stereo", "block", [](EvalConfig& c) -> int& { return c.matcher.block; }));
    f.push_back(integer("stereo", "search_range", [](EvalConfig& c) -> int& { return c.matcher.search_range; }));
    f.push_back(dbl("stereo", "uniqueness_ratio", [](EvalConfig& c) -> double& { return c.matcher.uniqueness_ratio; }));
    f.push_back(integer("stereo", "lr_tolerance", [](EvalConfig& c) -> int& { return c.matcher.lr_tolerance; }));
    return f;
  }();
  return table;
}

}  // namespace

CameraModel CameraRigConfig::nominal(const Workspace& ws) const {
  CameraModel intr;
  intr.focal_px = focal_px;
  intr.baseline_mm = baseline_mm;
  intr.pixel_scale_mm = pixel_scale_mm;
  intr.width_px = width_px;
  intr.height_px = height_px;
  intr.principal_x = 0.5 * width_px;
  intr.principal_y = 0.5 * height_px;
  return look_at_camera(ws.center(), standoff_mm, deg_to_rad(tilt_deg), intr);
}

void EvalConfig::validate() const {
  scene.validate();
  task.validate();
  if (!(camera.standoff_mm > 0.0)) throw ConfigError("camera: standoff must be positive");
  try {
    nominal_camera().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("camera: ") + e.what());
  }
  perception.validate();
  dsa.validate(perception.voxel_resolution);
  control.validate(task.h_max);
  randomization.validate();
  try {
    matcher.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  if (!(expert_tolerance > 0.0)) throw ConfigError("harness: expert tolerance must be positive");
}

std::vector<std::string> suite_names() {
  return {"performance", "ood-large", "ood-small", "ood-shape", "moving-camera", "regrasp"};
}

EvalConfig apply_suite(EvalConfig cfg, std::string_view suite) {
  cfg.suite = std::string(suite);
  auto set_scale = [&](double lo, double hi) {
    cfg.scene.object_scale_min = lo;
    cfg.scene.object_scale_max = hi;
    cfg.randomization.scale_min = lo;
    cfg.randomization.scale_max = hi;
  };
  if (suite == "performance") {
  } else if (suite == "ood-large") {
    set_scale(1.5, 2.0);
  } else if (suite == "ood-small") {
    set_scale(0.5, 0.75);
  } else if (suite == "ood-shape") {
    cfg.scene.object_mix = {0.0, 0.0, 0.0, 1.0};
  } else if (suite == "moving-camera") {
    cfg.moving_camera = true;
  } else if (suite == "regrasp") {
    cfg.regrasp = true;
  } else {
    throw ConfigError("unknown suite: " + std::string(suite));
  }
  return cfg;
}

EvalConfig apply_ini(EvalConfig cfg, const std::string& ini_text) {
  boost::property_tree::ptree tree;
  std::istringstream in(ini_text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config: line " + std::to_string(e.line()) + ": " + e.message());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("config: key '" + section + "' outside any section");
    }
    for (const auto& [key, value] : body) {
      const Field* match = nullptr;
      for (const Field& f : fields()) {
        if (f.section == section && f.key == key) match = &f;
      }
      if (!match) throw ConfigError("config: unknown key " + section + "." + key);
      match->set(cfg, value.data());
    }
  }
  return cfg;
}

EvalConfig load_config_file(EvalConfig cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return apply_ini(std::move(cfg), ss.str());
}

std::string to_ini(const EvalConfig& cfg) {
  EvalConfig& c = const_cast<EvalConfig&>(cfg);
  std::string out = "# suite = " + cfg.suite + "\n";
  std::string section;
  for (const Field& f : fields()) {
    if (f.section != section) {
      section = f.section;
      out += "\n[" + section + "]\n";
    }
    out += f.key + " = " + f.get(c) + "\n";
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h) {
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_fingerprint(const EvalConfig& cfg) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(to_ini(cfg))));
  return buf;
}

}  // namespace graspsim
