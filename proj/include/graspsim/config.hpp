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

#ifndef GRASPSIM_CONFIG_HPP_
#define GRASPSIM_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "graspsim/control.hpp"
#include "graspsim/dsa.hpp"
#include "graspsim/geometry.hpp"
#include "graspsim/perception.hpp"
#include "graspsim/randomization.hpp"
#include "graspsim/scene.hpp"
#include "graspsim/stereo.hpp"
#include "graspsim/task.hpp"

namespace graspsim {

struct CameraRigConfig {
  double standoff_mm = 150.0;
  double tilt_deg = 20.0;
  double focal_px = 1000.0;
  double baseline_mm = 5.0;
  double pixel_scale_mm = 0.25;
  int width_px = 600;
  int height_px = 600;

  /// Looks at the workspace centre; principal point at the image centre.
  CameraModel nominal(const Workspace& ws) const;
};

struct EvalConfig {
  std::string suite = "performance";
  SceneConfig scene;
  TaskConfig task;
  CameraRigConfig camera;
  PerceptionConfig perception;
  DsaConfig dsa;
  PhaseConfig control;
  RandomizationConfig randomization;
  MatcherConfig matcher;
  bool randomize = true;
  bool moving_camera = false;
  bool use_stereo = false;
  bool regrasp = false;
  double expert_tolerance = 0.01;  // normalized centroid units

  /// Throws ConfigError on the first invalid value.
  void validate() const;
  CameraModel nominal_camera() const { return camera.nominal(scene.workspace); }
};

std::vector<std::string> suite_names();

/// Applies a named preset. Throws ConfigError for unknown names.
EvalConfig apply_suite(EvalConfig cfg, std::string_view suite);

/**
 * Overrides fields from INI text ([section] then key = value). Angles are in
 * degrees, vectors are comma-separated. Unknown sections or keys and
 * unparsable values throw ConfigError naming the key.
 */
EvalConfig apply_ini(EvalConfig cfg, const std::string& ini_text);
EvalConfig load_config_file(EvalConfig cfg, const std::filesystem::path& path);

/// Canonical INI serialization covering every field, in a fixed order.
std::string to_ini(const EvalConfig& cfg);

/// FNV-1a of to_ini, as 16 hex digits.
std::string config_fingerprint(const EvalConfig& cfg);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

}  // namespace graspsim

#endif  // GRASPSIM_CONFIG_HPP_
