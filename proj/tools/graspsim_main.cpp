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

// Command-line front end: eval, stereo, synth-stereo, render.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "graspsim/config.hpp"
#include "graspsim/dsa.hpp"
#include "graspsim/errors.hpp"
#include "graspsim/harness.hpp"
#include "graspsim/perception.hpp"
#include "graspsim/render.hpp"
#include "graspsim/replay.hpp"
#include "graspsim/stereo.hpp"

namespace fs = std::filesystem;
using namespace graspsim;

namespace {

struct CommonConfigArgs {
  std::string config_path;
  std::string suite = "performance";
  bool no_dr = false;
  bool stereo = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "INI file overriding the defaults")->check(CLI::ExistingFile);
    cmd->add_option("--suite", suite, "Evaluation preset")
        ->check(CLI::IsMember(suite_names()));
    cmd->add_flag("--no-dr", no_dr, "Disable all domain randomization");
    cmd->add_flag("--stereo", stereo, "Route depth through the stereo matcher");
  }

  // Defaults, then the suite preset, then the file, then flags.
  EvalConfig build() const {
    EvalConfig cfg = apply_suite(EvalConfig{}, suite);
    if (!config_path.empty()) cfg = load_config_file(std::move(cfg), config_path);
    if (no_dr) cfg.randomize = false;
    if (stereo) cfg.use_stereo = true;
    cfg.validate();
    return cfg;
  }
};

int run_eval(const CommonConfigArgs& common, int n, std::uint64_t seed, const std::string& out,
             const std::string& policy, const std::string& actions, const std::string& replay_dir,
             int workers, bool dump_images) {
  const EvalConfig cfg = common.build();
  PolicyFactory factory;
  if (policy == "scripted") {
    factory = scripted_policy_factory(cfg);
  } else if (policy == "replay") {
    if (replay_dir.empty()) throw ConfigError("--policy replay needs --replay-dir");
    factory = replay_policy_factory(replay_dir);
  } else {
    if (actions.empty()) throw ConfigError("--policy external needs --actions");
    factory = external_policy_factory(actions);
  }
  EvalOptions opts;
  opts.n = n;
  opts.master_seed = seed;
  opts.workers = workers;
  if (dump_images) opts.image_root = fs::path(out) / "images";
  const Evaluation eval = evaluate(cfg, factory, opts);
  write_evaluation(out, cfg, eval);
  std::cout << report_table(eval.report);
  return 0;
}

int run_stereo(const std::string& left, const std::string& right, const std::string& out, int block,
               int search, double focal, double baseline) {
  MatcherConfig mc;
  mc.block = block;
  mc.search_range = search;
  CameraModel cam;
  cam.focal_px = focal;
  cam.baseline_mm = baseline;
  const Gray8 l = read_pgm8(left);
  const Gray8 r = read_pgm8(right);
  const DisparityImage disp = match_disparity(l, r, mc);
  write_pgm16(out, depth_to_gray16(disparity_to_depth(disp, cam)));
  std::size_t matched = 0;
  for (float d : disp.data()) matched += d >= 0.0f;
  std::cout << "matched " << matched << " / " << disp.data().size() << " pixels\n";
  return 0;
}

int run_synth_stereo(double height_mm, std::uint64_t seed, const std::string& out_dir) {
  CameraModel cam;
  cam.pose = Pose(rot_x(kPi), Vec3(0.0, 0.0, height_mm));
  const DepthImage depth = render_plane_depth(Vec3::Zero(), Vec3::UnitZ(), cam);
  const StereoPair pair = synthesize_stereo(depth, cam, seed);
  fs::create_directories(out_dir);
  write_pgm8(fs::path(out_dir) / "left.pgm", pair.left);
  write_pgm8(fs::path(out_dir) / "right.pgm", pair.right);
  write_pgm16(fs::path(out_dir) / "depth_truth.pgm", depth_to_gray16(depth));
  return 0;
}

int run_render(const CommonConfigArgs& common, std::uint64_t seed, const std::string& out_dir) {
  const EvalConfig cfg = common.build();
  Rng rng(derive_seed(seed, 1));
  const SceneState scene = reset(cfg.scene, rng);
  const CameraModel cam = cfg.nominal_camera();
  const RenderOutput frame = render_depth_and_masks(scene, cam);
  dump_render(out_dir, "frame", frame);
  const StereoPair pair = synthesize_stereo(frame.depth, cam, derive_seed(seed, 3));
  write_pgm8(fs::path(out_dir) / "frame_left.pgm", pair.left);
  write_pgm8(fs::path(out_dir) / "frame_right.pgm", pair.right);
  const PerceptionResult p = perceive(frame.depth, frame.masks, cam, cfg.scene.workspace, cfg.perception);
  dump_ortho(out_dir, "gripper", p.gripper.ortho);
  dump_ortho(out_dir, "target", p.target.ortho);
  TaskFsm fsm{cfg.task};
  const DsaImage dsa = encode_dsa(p, system_states(fsm, true, Phase::Begin),
                                  cfg.perception.voxel_resolution, cfg.dsa);
  write_dsa(out_dir, "dsa", dsa);
  std::cout << "object " << to_string(scene.target.kind) << " scale " << scene.target.scale << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graspsim: desk-scale grasping simulator and evaluation harness"};
  app.require_subcommand(1);

  CommonConfigArgs eval_common;
  int n = 0;
  std::uint64_t seed = 0;
  std::string out, policy = "scripted", actions, replay_dir;
  int workers = 1;
  bool dump_images = false;
  CLI::App* eval = app.add_subcommand("eval", "Run an evaluation suite");
  eval_common.add_to(eval);
  eval->add_option("--n", n, "Number of episodes")->required()->check(CLI::PositiveNumber);
  eval->add_option("--seed", seed, "Master seed");
  eval->add_option("--out", out, "Output directory")->required();
  eval->add_option("--policy", policy, "Policy driving the RL phase")
      ->check(CLI::IsMember({"scripted", "replay", "external"}));
  eval->add_option("--actions", actions, "Action file for --policy external")->check(CLI::ExistingFile);
  eval->add_option("--replay-dir", replay_dir, "Replay directory for --policy replay")
      ->check(CLI::ExistingDirectory);
  eval->add_option("--workers", workers, "Concurrent episodes")->check(CLI::PositiveNumber);
  eval->add_flag("--dump-images", dump_images, "Write DSA layers of every step as PGM");

  std::string left, right, depth_out;
  int block = 9, search = 128;
  double focal = 1000.0, baseline = 5.0;
  CLI::App* stereo = app.add_subcommand("stereo", "Block-match a rectified PGM pair into a depth PGM");
  stereo->add_option("--left", left)->required()->check(CLI::ExistingFile);
  stereo->add_option("--right", right)->required()->check(CLI::ExistingFile);
  stereo->add_option("--out", depth_out, "16-bit depth PGM in millimetres")->required();
  stereo->add_option("--block", block);
  stereo->add_option("--search", search);
  stereo->add_option("--focal", focal, "Focal length in pixels");
  stereo->add_option("--baseline", baseline, "Baseline in millimetres");

  double height = 100.0;
  std::uint64_t tex_seed = 1;
  std::string synth_out;
  CLI::App* synth = app.add_subcommand("synth-stereo", "Write a textured plane stereo pair");
  synth->add_option("--height", height, "Camera height above the plane in mm")->check(CLI::PositiveNumber);
  synth->add_option("--seed", tex_seed, "Texture seed");
  synth->add_option("--out", synth_out, "Output directory")->required();

  CommonConfigArgs render_common;
  std::uint64_t render_seed = 0;
  std::string render_out;
  CLI::App* render = app.add_subcommand("render", "Dump the first frame of an episode");
  render_common.add_to(render);
  render->add_option("--seed", render_seed, "Episode seed");
  render->add_option("--out", render_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*eval) return run_eval(eval_common, n, seed, out, policy, actions, replay_dir, workers, dump_images);
    if (*stereo) return run_stereo(left, right, depth_out, block, search, focal, baseline);
    if (*synth) return run_synth_stereo(height, tex_seed, synth_out);
    if (*render) return run_render(render_common, render_seed, render_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
