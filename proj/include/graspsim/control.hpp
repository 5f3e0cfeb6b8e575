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

#ifndef GRASPSIM_CONTROL_HPP_
#define GRASPSIM_CONTROL_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "graspsim/dsa.hpp"
#include "graspsim/geometry.hpp"
#include "graspsim/rng.hpp"
#include "graspsim/scene.hpp"
#include "graspsim/task.hpp"

namespace graspsim {

struct PhaseConfig {
  int h_begin = 6;
  double c_dis = 0.1;
  Vec3 offset = Vec3(0.0, 0.0, 0.1);  // L^dis
  double k_p = 10.0;
  double alpha_xyz = 0.3;
  double alpha_theta = 1.0;
  double z_safe_norm = 0.05;
  double lift_mm = 30.0;
  /// Drive along +(c1 - c2) instead of towards the target. Test use only.
  bool pid_away_from_target = false;

  void validate(int h_max) const;
};

/// Begin while t < h_begin; Rl when every |c1 - c2 - L| < c_dis; else Pid.
Phase classify_phase(int t, const Vec3& gripper_c, const Vec3& target_c, const PhaseConfig& cfg);

/// The virtual-clutch command: no motion, jaw open.
Command idle_action();

/// Proportional step towards the target: clip(k_p (c2 - c1)), no rotation,
/// jaw open. With away_from_target the sign is flipped.
Command pid_action(const Vec3& gripper_c, const Vec3& target_c, double k_p,
                   bool away_from_target = false);

/// decode_action scaled by (alpha_xyz, alpha_xyz, alpha_xyz, alpha_theta, 1).
Command scale_rl_action(DiscreteAction a, bool jaw_open, const PhaseConfig& cfg);

/**
 * When c1_z - c2_z < z_safe_norm, returns ceil(lift_mm / step_mm) unit +z
 * commands with the jaw element kept as given; otherwise empty.
 */
std::optional<std::vector<Command>> safe_height_correct(double gripper_cz, double target_cz,
                                                        const PhaseConfig& cfg, double step_mm,
                                                        bool jaw_open);

struct PolicyObservation {
  const DsaImage* dsa = nullptr;
  SystemStates sys;
  std::optional<Vec3> gripper_c;
  std::optional<Vec3> target_c;
  Phase phase = Phase::Rl;
  bool jaw_open = true;
  int t = 0;
};

/// Chooses a discrete action in the RL phase.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual DiscreteAction act(const PolicyObservation& obs, Rng& rng) = 0;
};

/// Builds one policy per episode seed.
using PolicyFactory = std::function<std::unique_ptr<Policy>(std::uint64_t episode_seed)>;

/**
 * Greedy axis descent on gap = c1 - c2 - gripper_offset: moves along the
 * axis with the largest |gap| until every |gap| < tolerance, then toggles
 * the jaw. A closed jaw is re-opened first.
 */
class ScriptedExpert : public Policy {
 public:
  ScriptedExpert(Vec3 gripper_offset, double tolerance)
      : offset_(std::move(gripper_offset)), tolerance_(tolerance) {}

  /// Stateful: an axis whose last two moves cancelled out is treated as
  /// converged for the rest of the episode.
  DiscreteAction act(const PolicyObservation& obs, Rng& rng) override;

  /// Axes flagged in settled are skipped by the argmax.
  static DiscreteAction choose(const Vec3& gripper_c, const Vec3& target_c, const Vec3& offset,
                               double tolerance, bool jaw_open,
                               const std::array<bool, 3>& settled = {});

 private:
  Vec3 offset_;
  double tolerance_;
  std::array<bool, 3> settled_{};
  int last_move_ = -1;
};

/// Plays a fixed list of actions; throws ContractViolation when exhausted.
class SequencePolicy : public Policy {
 public:
  explicit SequencePolicy(std::vector<DiscreteAction> actions) : actions_(std::move(actions)) {}
  DiscreteAction act(const PolicyObservation& obs, Rng& rng) override;
  std::size_t consumed() const { return next_; }

 private:
  std::vector<DiscreteAction> actions_;
  std::size_t next_ = 0;
};

/// One action index per line; blank lines and '#' comments are ignored.
/// Throws ValidationError with the line number on malformed input.
std::vector<DiscreteAction> read_action_file(const std::filesystem::path& path);

struct ControlInputs {
  int t = 0;
  std::optional<Vec3> gripper_c;
  std::optional<Vec3> target_c;
  bool jaw_open = true;
  SystemStates sys;
  const DsaImage* dsa = nullptr;
};

struct HybridDecision {
  Phase phase = Phase::Begin;
  Command command;
  std::optional<DiscreteAction> action;  // set in the Rl phase
  bool target_lost = false;
};

/// Phase used for the observation when a centroid is missing: Begin before
/// h_begin, else Pid.
Phase observed_phase(int t, const std::optional<Vec3>& gripper_c,
                     const std::optional<Vec3>& target_c, const PhaseConfig& cfg);

/**
 * Dispatches Begin -> idle, Pid -> pid_action, Rl -> scaled policy action.
 * A missing gripper or target centroid yields the idle command with
 * target_lost set, in every phase.
 * The safe-height check is the caller's job, after actuation.
 */
HybridDecision hybrid_step(const ControlInputs& in, Policy& policy, const PhaseConfig& cfg, Rng& rng);

}  // namespace graspsim

#endif  // GRASPSIM_CONTROL_HPP_
