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

#ifndef GRASPSIM_REPLAY_HPP_
#define GRASPSIM_REPLAY_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "graspsim/geometry.hpp"
#include "graspsim/scene.hpp"
#include "graspsim/task.hpp"

namespace graspsim {

struct StepRecord {
  int t = 0;
  Phase phase = Phase::Begin;
  int action = -1;  // discrete action index, -1 outside the Rl phase
  Command command;  // as actuated, after any action noise
  double reward = 0.0;
  TaskState state = TaskState::NormalProgress;  // after the step
  SystemStates sys;
  std::optional<Vec3> gripper_c;
  std::optional<Vec3> target_c;
  bool correction = false;  // safe-height sub-step
  bool clamped = false;
  bool below_safe_height = false;
  bool target_lost = false;
  bool jaw_closed = false;
  bool grasp_ok = false;
  std::uint64_t dsa_digest = 0;
  std::string image_ref = "-";

  bool operator==(const StepRecord&) const = default;
};

struct EpisodeRecord {
  std::uint64_t seed = 0;
  std::string fingerprint;
  ObjectKind object = ObjectKind::Needle;
  double scale = 1.0;
  std::vector<StepRecord> steps;
  bool terminated = false;
  int horizon = 0;  // H, the terminated timestep
  bool success = false;
  double discounted_return = 0.0;

  bool operator==(const EpisodeRecord&) const = default;
};

inline constexpr int kReplayVersion = 1;

/// Malformed replay content; carries the 1-based line number.
class ReplayParseError : public std::runtime_error {
 public:
  ReplayParseError(int line, const std::string& what)
      : std::runtime_error("replay line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// The file was written by an incompatible format version.
class ReplayVersionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Line format: a header "graspsim-replay version=1 ...", one "step" line of
 * key=value fields per step, and an "end" footer. Doubles use %.17g so
 * parsing restores them bit-exactly.
 */
std::string format_replay(const EpisodeRecord& record);
EpisodeRecord parse_replay(const std::string& text);

void write_replay(const EpisodeRecord& record, const std::filesystem::path& path);
EpisodeRecord read_replay(const std::filesystem::path& path);

std::string replay_filename(std::uint64_t seed);

}  // namespace graspsim

#endif  // GRASPSIM_REPLAY_HPP_
