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

#ifndef GRASPSIM_HARNESS_HPP_
#define GRASPSIM_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "graspsim/config.hpp"
#include "graspsim/control.hpp"
#include "graspsim/dsa.hpp"
#include "graspsim/replay.hpp"

namespace graspsim {

/// (H_max - H) / H_max on success, 0 on failure. Throws ValidationError
/// unless 1 <= H <= H_max.
double grasping_score(int horizon, int h_max, bool success);

/// sum_i gamma^i r_i, folded left to right.
double discounted_return(const std::vector<double>& rewards, double gamma);

/**
 * Normalized offset between the perceived gripper centroid and the centre
 * of its capture box, measured by rendering the gripper alone at the
 * workspace centre through the nominal perception pipeline.
 */
Vec3 calibrate_gripper_offset(const EvalConfig& cfg);

/// Per-frame hook, for inspection in tests and debugging.
struct FrameView {
  int t = 0;
  const SceneState* scene = nullptr;
  const PerceptionResult* perception = nullptr;
  const DsaImage* dsa = nullptr;
};

struct EpisodeOptions {
  /// When set, DSA layers of every step are written here as PGM.
  std::optional<std::filesystem::path> image_dir;
  std::function<void(const FrameView&)> on_frame;
};

/**
 * One closed-loop episode. Every random draw comes from streams derived from
 * seed, so the record is a pure function of (cfg, seed, policy).
 */
EpisodeRecord run_episode(const EvalConfig& cfg, Policy& policy, std::uint64_t seed,
                          const EpisodeOptions& opts = {});

struct ObjectBreakdown {
  ObjectKind kind = ObjectKind::Needle;
  int episodes = 0;
  int successes = 0;
  double success_rate = 0.0;
  double score_mean = 0.0;
};

struct EvalReport {
  std::string suite;
  std::string fingerprint;
  std::uint64_t master_seed = 0;
  int n_episodes = 0;
  int successes = 0;
  double success_rate = 0.0;
  double score_mean = 0.0;
  double score_std = 0.0;  // population standard deviation
  double return_mean = 0.0;
  double steps_mean = 0.0;
  std::vector<ObjectBreakdown> per_object;  // kinds that occurred, in kAllObjectKinds order
};

/// Reduces records in seed order. Throws ValidationError when empty.
EvalReport aggregate(std::vector<EpisodeRecord> records, int h_max, const std::string& suite,
                     const std::string& fingerprint, std::uint64_t master_seed);

/// Seed of episode i.
inline std::uint64_t episode_seed(std::uint64_t master_seed, int index) {
  return master_seed + static_cast<std::uint64_t>(index);
}

struct EvalOptions {
  int n = 0;
  std::uint64_t master_seed = 0;
  int workers = 1;
  std::optional<std::filesystem::path> image_root;
};

struct Evaluation {
  EvalReport report;
  std::vector<EpisodeRecord> records;  // sorted by seed
};

/// Runs n episodes on a bounded worker pool. Throws ValidationError for n < 1.
Evaluation evaluate(const EvalConfig& cfg, const PolicyFactory& factory, const EvalOptions& opts);

PolicyFactory scripted_policy_factory(const EvalConfig& cfg);
/// Replays the actions logged in <dir>/episode_<seed>.replay.
PolicyFactory replay_policy_factory(const std::filesystem::path& dir);
PolicyFactory external_policy_factory(const std::filesystem::path& action_file);

std::string report_csv(const EvalReport& report);
std::string report_table(const EvalReport& report);
std::string episodes_csv(const std::vector<EpisodeRecord>& records, int h_max);

/// Writes report.csv, report.txt, episodes.csv, config.ini and
/// replays/episode_<seed>.replay under dir.
void write_evaluation(const std::filesystem::path& dir, const EvalConfig& cfg, const Evaluation& eval);

}  // namespace graspsim

#endif  // GRASPSIM_HARNESS_HPP_
