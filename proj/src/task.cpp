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

#include "graspsim/task.hpp"

#include <string>

#include "graspsim/errors.hpp"

namespace graspsim {

std::string_view to_string(TaskState s) {
  switch (s) {
    case TaskState::NormalProgress: return "normal";
    case TaskState::AbnormalProgress: return "abnormal";
    case TaskState::SuccessTermination: return "success";
    case TaskState::FailedTermination: return "failed";
  }
  return "unknown";
}

TaskState task_state_from_string(std::string_view name) {
  for (auto s : {TaskState::NormalProgress, TaskState::AbnormalProgress,
                 TaskState::SuccessTermination, TaskState::FailedTermination}) {
    if (to_string(s) == name) return s;
  }
  throw ValidationError("unknown task state: " + std::string(name));
}

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Begin: return "begin";
    case Phase::Pid: return "pid";
    case Phase::Rl: return "rl";
  }
  return "unknown";
}

Phase phase_from_string(std::string_view name) {
  for (auto p : {Phase::Begin, Phase::Pid, Phase::Rl}) {
    if (to_string(p) == name) return p;
  }
  throw ValidationError("unknown phase: " + std::string(name));
}

void TaskConfig::validate() const {
  if (h_max < 1) throw ConfigError("task: h_max must be at least 1");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("task: gamma must be in [0, 1]");
}

FsmStep step_fsm(const TaskFsm& fsm, const TaskEvents& ev) {
  if (fsm.terminal()) throw ContractViolation("step_fsm: task already terminated");
  FsmStep out{fsm};
  TaskFsm& next = out.fsm;
  const TaskConfig& c = fsm.config;
  next.t = fsm.t + 1;

  if (ev.jaw_closed && ev.grasp_ok) {
    next.state = TaskState::SuccessTermination;
    out.reward = c.success_reward;
  } else if (ev.jaw_closed || next.t >= c.h_max) {
    next.state = TaskState::FailedTermination;
    out.reward = c.failure_reward;
  } else if (ev.clamped_at_boundary || ev.below_safe_height || ev.target_lost ||
             ev.failed_attempt) {
    next.state = TaskState::AbnormalProgress;
    out.reward = c.abnormal_reward;
  } else {
    next.state = TaskState::NormalProgress;
    out.reward = c.normal_reward;
  }
  out.terminated = next.terminal();
  return out;
}

DiscreteAction discrete_action_from_index(int index) {
  if (index < 0 || index >= kNumDiscreteActions) {
    throw ValidationError("discrete action index out of range: " + std::to_string(index));
  }
  return static_cast<DiscreteAction>(index);
}

Command decode_action(DiscreteAction a, bool jaw_open) {
  const double jaw = jaw_open ? 1.0 : -1.0;
  Command cmd{{0.0, 0.0, 0.0, 0.0, jaw}};
  const int i = static_cast<int>(a);
  if (a == DiscreteAction::ToggleJaw) {
    cmd.v[4] = -jaw;
  } else {
    cmd.v[static_cast<std::size_t>(i / 2)] = (i % 2 == 0) ? 1.0 : -1.0;
  }
  return cmd;
}

SystemStates system_states(const TaskFsm& fsm, bool jaw_open, Phase phase) {
  SystemStates out;
  out.s[0] = static_cast<double>(static_cast<int>(fsm.state)) / 3.0;
  out.s[1] = jaw_open ? 1.0 : 0.0;
  out.s[2] = static_cast<double>(static_cast<int>(phase)) / 2.0;
  return out;
}

}  // namespace graspsim
