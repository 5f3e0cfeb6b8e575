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

#ifndef GRASPSIM_TASK_HPP_
#define GRASPSIM_TASK_HPP_

#include <array>
#include <string_view>

#include "graspsim/scene.hpp"

namespace graspsim {

enum class TaskState {
  NormalProgress = 0,
  AbnormalProgress = 1,
  SuccessTermination = 2,
  FailedTermination = 3,
};

std::string_view to_string(TaskState s);
TaskState task_state_from_string(std::string_view name);

/// Sub-policy in charge of a step.
enum class Phase { Begin = 0, Pid = 1, Rl = 2 };

std::string_view to_string(Phase p);
Phase phase_from_string(std::string_view name);

struct TaskConfig {
  int h_max = 80;
  double gamma = 0.99;
  double success_reward = 1.0;
  double failure_reward = -0.1;
  double abnormal_reward = -0.01;
  double normal_reward = -0.001;

  void validate() const;
};

struct TaskEvents {
  bool jaw_closed = false;
  bool grasp_ok = false;
  bool clamped_at_boundary = false;
  bool below_safe_height = false;
  bool target_lost = false;
  /// Failed closure that re-grasp mode lets the episode survive.
  bool failed_attempt = false;
};

/// Sparse-reward task state machine. Terminal states absorb.
struct TaskFsm {
  TaskConfig config;
  TaskState state = TaskState::NormalProgress;
  int t = 0;

  bool terminal() const {
    return state == TaskState::SuccessTermination || state == TaskState::FailedTermination;
  }
};

struct FsmStep {
  TaskFsm fsm;
  double reward = 0.0;
  bool terminated = false;
};

/// Advances one step. Throws ContractViolation on a terminal machine.
FsmStep step_fsm(const TaskFsm& fsm, const TaskEvents& events);

/// Discrete action alphabet: +-x, +-y, +-z, +-yaw, jaw toggle.
enum class DiscreteAction : int {
  PlusX = 0, MinusX, PlusY, MinusY, PlusZ, MinusZ, PlusYaw, MinusYaw, ToggleJaw,
};

inline constexpr int kNumDiscreteActions = 9;

/// Throws ValidationError for indices outside [0, 9).
DiscreteAction discrete_action_from_index(int index);

Command decode_action(DiscreteAction a, bool jaw_open);

struct SystemStates {
  std::array<double, 3> s{};  // task state, jaw, controller phase; each in [0, 1]
  bool operator==(const SystemStates&) const = default;
};

SystemStates system_states(const TaskFsm& fsm, bool jaw_open, Phase phase);

}  // namespace graspsim

#endif  // GRASPSIM_TASK_HPP_
