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

#include "graspsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <deque>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "graspsim/errors.hpp"
#include "graspsim/perception.hpp"
#include "graspsim/randomization.hpp"
#include "graspsim/render.hpp"
#include "graspsim/stereo.hpp"

namespace graspsim {

namespace {

// Stream ids for derive_seed.
constexpr std::uint64_t kSceneStream = 1;
constexpr std::uint64_t kRandomizationStream = 2;
constexpr std::uint64_t kTextureStream = 3;
constexpr std::uint64_t kPolicyStream = 4;
constexpr std::uint64_t kCameraWalkStream = 5;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

class Observer {
 public:
  Observer(const EvalConfig& cfg, std::uint64_t seed, Rng& dr_rng)
      : cfg_(cfg), nominal_(cfg.nominal_camera()), dr_rng_(dr_rng),
        texture_seed_(derive_seed(seed, kTextureStream)) {}

  PerceptionResult observe(const SceneState& scene, const CameraModel& cam) const {
    RenderOutput frame = render_depth_and_masks(scene, cam);
    DepthImage depth = std::move(frame.depth);
    MaskSet masks = std::move(frame.masks);
    if (cfg_.use_stereo) {
      const StereoPair pair = synthesize_stereo(depth, cam, texture_seed_);
      depth = disparity_to_depth(match_disparity(pair.left, pair.right, cfg_.matcher), cam);
    }
    if (cfg_.randomize) {
      depth = corrupt_depth(depth, cfg_.randomization, dr_rng_);
      masks = cutout_masks(masks, cfg_.randomization, dr_rng_);
    }
    return perceive(depth, masks, nominal_, cfg_.scene.workspace, cfg_.perception);
  }

  const CameraModel& nominal() const { return nominal_; }

 private:
  const EvalConfig& cfg_;
  CameraModel nominal_;
  Rng& dr_rng_;
  std::uint64_t texture_seed_;
};

}  // namespace

double grasping_score(int horizon, int h_max, bool success) {
  if (horizon < 1 || horizon > h_max) throw ValidationError("grasping_score: H must be in [1, H_max]");
  if (!success) return 0.0;
  return static_cast<double>(h_max - horizon) / h_max;
}

double discounted_return(const std::vector<double>& rewards, double gamma) {
  double total = 0.0, weight = 1.0;
  for (double r : rewards) {
    total += weight * r;
    weight *= gamma;
  }
  return total;
}

Vec3 calibrate_gripper_offset(const EvalConfig& cfg) {
  cfg.validate();
  SceneState s;
  s.config = cfg.scene;
  s.gripper.position_mm = cfg.scene.workspace.center();
  s.gripper.tilt_rad = cfg.scene.gripper_tilt_rad;
  s.gripper_geometry = make_gripper_geometry(cfg.scene.gripper_tilt_rad, cfg.scene.surface_spacing_mm);
  const CameraModel cam = cfg.nominal_camera();
  const RenderOutput frame = render_point_sets(s.gripper_world_points(), {}, cam);
  const ObjectPerception p =
      perceive_object(frame.depth, frame.masks.gripper, cam, cfg.scene.workspace, cfg.perception);
  if (!p.centroid) throw ConfigError("calibration: gripper not visible from the nominal camera");
  const Workspace& ws = cfg.scene.workspace;
  const Vec3 capture = (s.gripper.position_mm - ws.min_mm).cwiseQuotient(ws.extent());
  return *p.centroid - capture;
}

EpisodeRecord run_episode(const EvalConfig& cfg, Policy& policy, std::uint64_t seed,
                          const EpisodeOptions& opts) {
  cfg.validate();
  Rng scene_rng(derive_seed(seed, kSceneStream));
  Rng dr_rng(derive_seed(seed, kRandomizationStream));
  Rng policy_rng(derive_seed(seed, kPolicyStream));
  Rng walk_rng(derive_seed(seed, kCameraWalkStream));

  SceneConfig scene_cfg = cfg.scene;
  if (cfg.randomize) {
    scene_cfg.object_scale_min = cfg.randomization.scale_min;
    scene_cfg.object_scale_max = cfg.randomization.scale_max;
  }
  SceneState scene = reset(scene_cfg, scene_rng);

  Observer observer(cfg, seed, dr_rng);
  const Vec3 look_at = cfg.scene.workspace.center();
  CameraNoise cam_noise;
  if (cfg.randomize) cam_noise = sample_camera_noise(cfg.randomization, dr_rng);
  auto actual_camera = [&] { return apply_camera_noise(observer.nominal(), look_at, cam_noise); };

  EpisodeRecord rec;
  rec.seed = seed;
  rec.fingerprint = config_fingerprint(cfg);
  rec.object = scene.target.kind;
  rec.scale = scene.target.scale;

  const int n = cfg.perception.voxel_resolution;
  TaskFsm fsm{cfg.task};
  PerceptionResult obs = observer.observe(scene, actual_camera());
  std::deque<Command> pending;
  bool spare_attempt = cfg.regrasp;
  std::vector<double> rewards;

  while (!fsm.terminal()) {
    StepRecord step;
    step.t = fsm.t;
    const auto& gc = obs.gripper.centroid;
    const auto& tc = obs.target.centroid;
    step.gripper_c = gc;
    step.target_c = tc;
    const bool jaw_open = scene.gripper.jaw_open;

    Phase phase = observed_phase(fsm.t, gc, tc, cfg.control);
    const SystemStates sys = system_states(fsm, jaw_open, phase);
    const DsaImage dsa = encode_dsa(obs, sys, n, cfg.dsa);
    if (opts.on_frame) opts.on_frame({fsm.t, &scene, &obs, &dsa});
    if (opts.image_dir) {
      step.image_ref = "episode_" + std::to_string(seed) + "_t" + std::to_string(fsm.t);
      write_dsa(*opts.image_dir, step.image_ref, dsa);
    }

    Command cmd;
    TaskEvents events;
    if (!pending.empty()) {
      cmd = pending.front();
      pending.pop_front();
      step.correction = true;
    } else {
      const HybridDecision d =
          hybrid_step({fsm.t, gc, tc, jaw_open, sys, &dsa}, policy, cfg.control, policy_rng);
      cmd = d.command;
      phase = d.phase;
      if (d.action) step.action = static_cast<int>(*d.action);
      events.target_lost = d.target_lost;
    }
    if (cfg.randomize) cmd = perturb_action(cmd, cfg.randomization, dr_rng);

    const ActuationResult act = apply_action(scene, cmd);
    scene = act.state;
    events.clamped_at_boundary = act.clamped;
    events.jaw_closed = act.jaw_closed;
    events.grasp_ok = act.grasp_ok;
    if (act.jaw_closed && !act.grasp_ok && spare_attempt) {
      spare_attempt = false;
      events.jaw_closed = false;
      events.failed_attempt = true;
    }

    const bool ending = events.jaw_closed || fsm.t + 1 >= cfg.task.h_max;
    if (!ending) {
      if (cfg.randomize && cfg.moving_camera) {
        cam_noise = step_camera_noise(cam_noise, cfg.randomization, walk_rng);
      }
      obs = observer.observe(scene, actual_camera());
      const auto& ngc = obs.gripper.centroid;
      const auto& ntc = obs.target.centroid;
      if (pending.empty() && ngc && ntc) {
        if (auto lift = safe_height_correct(ngc->z(), ntc->z(), cfg.control,
                                            cfg.scene.step_translation_mm, scene.gripper.jaw_open)) {
          pending.assign(lift->begin(), lift->end());
          events.below_safe_height = true;
        }
      }
    }

    const FsmStep fs = step_fsm(fsm, events);
    fsm = fs.fsm;
    step.phase = phase;
    step.sys = sys;
    step.command = cmd;
    step.reward = fs.reward;
    step.state = fsm.state;
    step.clamped = events.clamped_at_boundary;
    step.below_safe_height = events.below_safe_height;
    step.target_lost = events.target_lost;
    step.jaw_closed = act.jaw_closed;
    step.grasp_ok = act.grasp_ok;
    step.dsa_digest = dsa_digest(dsa);
    rec.steps.push_back(std::move(step));
    rewards.push_back(fs.reward);
  }

  rec.terminated = true;
  rec.horizon = fsm.t;
  rec.success = fsm.state == TaskState::SuccessTermination;
  rec.discounted_return = discounted_return(rewards, cfg.task.gamma);
  return rec;
}

EvalReport aggregate(std::vector<EpisodeRecord> records, int h_max, const std::string& suite,
                     const std::string& fingerprint, std::uint64_t master_seed) {
  if (records.empty()) throw ValidationError("aggregate: no episodes");
  std::sort(records.begin(), records.end(),
            [](const EpisodeRecord& a, const EpisodeRecord& b) { return a.seed < b.seed; });
  EvalReport r;
  r.suite = suite;
  r.fingerprint = fingerprint;
  r.master_seed = master_seed;
  r.n_episodes = static_cast<int>(records.size());

  std::array<ObjectBreakdown, kAllObjectKinds.size()> per{};
  std::array<double, kAllObjectKinds.size()> per_score{};
  double score_sum = 0.0, return_sum = 0.0, steps_sum = 0.0;
  std::vector<double> scores;
  for (const EpisodeRecord& e : records) {
    const double s = grasping_score(e.horizon, h_max, e.success);
    scores.push_back(s);
    score_sum += s;
    return_sum += e.discounted_return;
    steps_sum += e.horizon;
    r.successes += e.success;
    const auto k = static_cast<std::size_t>(e.object);
    per[k].kind = e.object;
    per[k].episodes += 1;
    per[k].successes += e.success;
    per_score[k] += s;
  }
  const double count = r.n_episodes;
  r.success_rate = static_cast<double>(r.successes) / count;
  r.score_mean = score_sum / count;
  double var = 0.0;
  for (double s : scores) var += (s - r.score_mean) * (s - r.score_mean);
  r.score_std = std::sqrt(var / count);
  r.return_mean = return_sum / count;
  r.steps_mean = steps_sum / count;
  for (std::size_t k = 0; k < per.size(); ++k) {
    if (per[k].episodes == 0) continue;
    per[k].success_rate = static_cast<double>(per[k].successes) / per[k].episodes;
    per[k].score_mean = per_score[k] / per[k].episodes;
    r.per_object.push_back(per[k]);
  }
  return r;
}

Evaluation evaluate(const EvalConfig& cfg, const PolicyFactory& factory, const EvalOptions& opts) {
  if (opts.n < 1) throw ValidationError("evaluate: n must be at least 1");
  cfg.validate();
  std::vector<EpisodeRecord> records(static_cast<std::size_t>(opts.n));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;

  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= opts.n) return;
      try {
        const std::uint64_t seed = episode_seed(opts.master_seed, i);
        auto policy = factory(seed);
        EpisodeOptions eo;
        if (opts.image_root) eo.image_dir = *opts.image_root;
        records[static_cast<std::size_t>(i)] = run_episode(cfg, *policy, seed, eo);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(opts.n);
        return;
      }
    }
  };
  const int workers = std::clamp(opts.workers, 1, opts.n);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  Evaluation out;
  out.report = aggregate(records, cfg.task.h_max, cfg.suite, config_fingerprint(cfg), opts.master_seed);
  std::sort(records.begin(), records.end(),
            [](const EpisodeRecord& a, const EpisodeRecord& b) { return a.seed < b.seed; });
  out.records = std::move(records);
  return out;
}

PolicyFactory scripted_policy_factory(const EvalConfig& cfg) {
  const Vec3 offset = calibrate_gripper_offset(cfg);
  const double tol = cfg.expert_tolerance;
  return [offset, tol](std::uint64_t) { return std::make_unique<ScriptedExpert>(offset, tol); };
}

PolicyFactory replay_policy_factory(const std::filesystem::path& dir) {
  return [dir](std::uint64_t seed) {
    const EpisodeRecord rec = read_replay(dir / replay_filename(seed));
    std::vector<DiscreteAction> actions;
    for (const StepRecord& s : rec.steps) {
      if (s.action >= 0) actions.push_back(static_cast<DiscreteAction>(s.action));
    }
    return std::make_unique<SequencePolicy>(std::move(actions));
  };
}

PolicyFactory external_policy_factory(const std::filesystem::path& action_file) {
  auto actions = std::make_shared<const std::vector<DiscreteAction>>(read_action_file(action_file));
  return [actions](std::uint64_t) { return std::make_unique<SequencePolicy>(*actions); };
}

std::string report_csv(const EvalReport& r) {
  std::ostringstream out;
  out << "scope,episodes,successes,success_rate,score_mean,score_std,return_mean,steps_mean\n";
  out << "all," << r.n_episodes << "," << r.successes << "," << g17(r.success_rate) << ","
      << g17(r.score_mean) << "," << g17(r.score_std) << "," << g17(r.return_mean) << ","
      << g17(r.steps_mean) << "\n";
  for (const ObjectBreakdown& o : r.per_object) {
    out << to_string(o.kind) << "," << o.episodes << "," << o.successes << ","
        << g17(o.success_rate) << "," << g17(o.score_mean) << ",,,\n";
  }
  return out.str();
}

std::string report_table(const EvalReport& r) {
  std::ostringstream out;
  out << "suite        " << r.suite << "\n"
      << "fingerprint  " << r.fingerprint << "\n"
      << "master seed  " << r.master_seed << "\n"
      << "episodes     " << r.n_episodes << "\n"
      << "success rate " << fixed(r.success_rate, 4) << " (" << r.successes << "/" << r.n_episodes << ")\n"
      << "score        " << fixed(r.score_mean, 4) << " +- " << fixed(r.score_std, 4) << "\n"
      << "return       " << fixed(r.return_mean, 4) << "\n"
      << "mean steps   " << fixed(r.steps_mean, 2) << "\n\n";
  char line[128];
  std::snprintf(line, sizeof line, "%-8s %8s %9s %8s %8s\n", "object", "episodes", "successes", "rate", "score");
  out << line;
  for (const ObjectBreakdown& o : r.per_object) {
    std::snprintf(line, sizeof line, "%-8s %8d %9d %8.4f %8.4f\n", std::string(to_string(o.kind)).c_str(),
                  o.episodes, o.successes, o.success_rate, o.score_mean);
    out << line;
  }
  return out.str();
}

std::string episodes_csv(const std::vector<EpisodeRecord>& records, int h_max) {
  std::ostringstream out;
  out << "seed,object,scale,steps,success,score,return\n";
  for (const EpisodeRecord& e : records) {
    out << e.seed << "," << to_string(e.object) << "," << g17(e.scale) << "," << e.horizon << ","
        << e.success << "," << g17(grasping_score(e.horizon, h_max, e.success)) << ","
        << g17(e.discounted_return) << "\n";
  }
  return out.str();
}

void write_evaluation(const std::filesystem::path& dir, const EvalConfig& cfg, const Evaluation& eval) {
  std::filesystem::create_directories(dir / "replays");
  write_text(dir / "report.csv", report_csv(eval.report));
  write_text(dir / "report.txt", report_table(eval.report));
  write_text(dir / "episodes.csv", episodes_csv(eval.records, cfg.task.h_max));
  write_text(dir / "config.ini", to_ini(cfg));
  for (const EpisodeRecord& e : eval.records) write_replay(e, dir / "replays" / replay_filename(e.seed));
}

}  // namespace graspsim
