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

#include "graspsim/control.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "graspsim/errors.hpp"

namespace graspsim {

void PhaseConfig::validate(int h_max) const {
  if (!(c_dis > 0.0)) throw ConfigError("control: c_dis must be positive");
  if (h_begin < 0 || h_begin > h_max) throw ConfigError("control: h_begin must be in [0, h_max]");
  if (!(alpha_xyz > 0.0 && alpha_xyz <= 1.0) || !(alpha_theta > 0.0 && alpha_theta <= 1.0)) {
    throw ConfigError("control: action scales must be in (0, 1]");
  }
  if (!(k_p > 0.0)) throw ConfigError("control: k_p must be positive");
  if (!(lift_mm >= 0.0)) throw ConfigError("control: lift must be non-negative");
  if (!offset.allFinite() || !std::isfinite(z_safe_norm)) throw ConfigError("control: non-finite value");
}

Phase classify_phase(int t, const Vec3& gripper_c, const Vec3& target_c, const PhaseConfig& cfg) {
  if (t < cfg.h_begin) return Phase::Begin;
  const Vec3 l = gripper_c - target_c - cfg.offset;
  return (l.cwiseAbs().array() < cfg.c_dis).all() ? Phase::Rl : Phase::Pid;
}

Command idle_action() { return Command::idle(); }

Command pid_action(const Vec3& gripper_c, const Vec3& target_c, double k_p, bool away_from_target) {
  const Vec3 diff = away_from_target ? Vec3(gripper_c - target_c) : Vec3(target_c - gripper_c);
  Command cmd = Command::idle();
  for (int a = 0; a < 3; ++a) cmd.v[static_cast<std::size_t>(a)] = std::clamp(k_p * diff[a], -1.0, 1.0);
  return cmd;
}

Command scale_rl_action(DiscreteAction a, bool jaw_open, const PhaseConfig& cfg) {
  Command cmd = decode_action(a, jaw_open);
  for (int i = 0; i < 3; ++i) cmd.v[static_cast<std::size_t>(i)] *= cfg.alpha_xyz;
  cmd.v[3] *= cfg.alpha_theta;
  return cmd;
}

std::optional<std::vector<Command>> safe_height_correct(double gripper_cz, double target_cz,
                                                        const PhaseConfig& cfg, double step_mm,
                                                        bool jaw_open) {
  if (!(gripper_cz - target_cz < cfg.z_safe_norm)) return std::nullopt;
  const int count = static_cast<int>(std::ceil(cfg.lift_mm / step_mm - 1e-12));
  return std::vector<Command>(static_cast<std::size_t>(count),
                              Command{{0.0, 0.0, 1.0, 0.0, jaw_open ? 1.0 : -1.0}});
}

DiscreteAction ScriptedExpert::choose(const Vec3& gripper_c, const Vec3& target_c,
                                      const Vec3& offset, double tolerance, bool jaw_open,
                                      const std::array<bool, 3>& settled) {
  if (!jaw_open) return DiscreteAction::ToggleJaw;
  const Vec3 gap = gripper_c - target_c - offset;
  int axis = -1;
  for (int a = 0; a < 3; ++a) {
    if (settled[a]) continue;
    if (axis < 0 || std::abs(gap[a]) > std::abs(gap[axis])) axis = a;
  }
  if (axis < 0 || std::abs(gap[axis]) < tolerance) return DiscreteAction::ToggleJaw;
  return static_cast<DiscreteAction>(2 * axis + (gap[axis] > 0.0 ? 1 : 0));
}

DiscreteAction ScriptedExpert::act(const PolicyObservation& obs, Rng& /*rng*/) {
  if (!obs.gripper_c || !obs.target_c) {
    throw ContractViolation("ScriptedExpert: centroids required");
  }
  const DiscreteAction a =
      choose(*obs.gripper_c, *obs.target_c, offset_, tolerance_, obs.jaw_open, settled_);
  const int idx = static_cast<int>(a);
  if (idx < 6) {
    // Opposite direction on the same axis: the gap is below one step.
    if (last_move_ >= 0 && last_move_ / 2 == idx / 2 && last_move_ != idx) settled_[idx / 2] = true;
    last_move_ = idx;
  } else if (a == DiscreteAction::ToggleJaw && !obs.jaw_open) {
    settled_ = {};
    last_move_ = -1;
  }
  return a;
}

DiscreteAction SequencePolicy::act(const PolicyObservation& /*obs*/, Rng& /*rng*/) {
  if (next_ >= actions_.size()) throw ContractViolation("SequencePolicy: action list exhausted");
  return actions_[next_++];
}

std::vector<DiscreteAction> read_action_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open action file: " + path.string());
  std::vector<DiscreteAction> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string tok = line.substr(first, last - first + 1);
    std::size_t used = 0;
    int value = -1;
    try {
      value = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || value < 0 || value >= kNumDiscreteActions) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                            ": expected an action index in [0, 8]");
    }
    out.push_back(static_cast<DiscreteAction>(value));
  }
  return out;
}

Phase observed_phase(int t, const std::optional<Vec3>& gripper_c,
                     const std::optional<Vec3>& target_c, const PhaseConfig& cfg) {
  if (t < cfg.h_begin) return Phase::Begin;
  if (!gripper_c || !target_c) return Phase::Pid;
  return classify_phase(t, *gripper_c, *target_c, cfg);
}

HybridDecision hybrid_step(const ControlInputs& in, Policy& policy, const PhaseConfig& cfg, Rng& rng) {
  HybridDecision d;
  d.phase = observed_phase(in.t, in.gripper_c, in.target_c, cfg);
  d.target_lost = !in.gripper_c || !in.target_c;
  if (d.phase == Phase::Begin || d.target_lost) {
    d.command = idle_action();
    return d;
  }
  if (d.phase == Phase::Pid) {
    d.command = pid_action(*in.gripper_c, *in.target_c, cfg.k_p, cfg.pid_away_from_target);
    return d;
  }
  PolicyObservation obs{in.dsa, in.sys, in.gripper_c, in.target_c, d.phase, in.jaw_open, in.t};
  d.action = policy.act(obs, rng);
  d.command = scale_rl_action(*d.action, in.jaw_open, cfg);
  return d;
}

}  // namespace graspsim
