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

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"
#include "graspsim/image.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(GRASPSIM_CLI) + " " + args + " > '" + log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("eval writes the report and is reproducible") {
  testing::TempDir dir("cli_eval");
  const fs::path a = dir.path() / "a", b = dir.path() / "b", log = dir.path() / "log.txt";
  REQUIRE(run("eval --suite ood-shape --n 3 --seed 11 --out " + a.string(), log) == 0);
  CHECK(testing::slurp(log).find("success rate") != std::string::npos);
  REQUIRE(run("eval --suite ood-shape --n 3 --seed 11 --workers 3 --out " + b.string(), log) == 0);
  for (const char* name : {"report.csv", "episodes.csv", "config.ini", "report.txt"}) {
    CHECK(testing::slurp(a / name) == testing::slurp(b / name));
  }
  CHECK(fs::exists(a / "replays" / "episode_13.replay"));

  // Replaying the logged actions gives the same episodes.
  const fs::path c = dir.path() / "c";
  REQUIRE(run("eval --suite ood-shape --n 3 --seed 11 --policy replay --replay-dir " + (a / "replays").string() +
                  " --out " + c.string(),
              log) == 0);
  CHECK(testing::slurp(a / "episodes.csv") == testing::slurp(c / "episodes.csv"));

  // An external action file drives the RL phase.
  const fs::path actions = dir.path() / "actions.txt";
  {
    std::ofstream out(actions);
    for (int i = 0; i < 80; ++i) out << "8\n";
  }
  CHECK(run("eval --no-dr --n 1 --seed 2 --policy external --actions " + actions.string() + " --out " +
                (dir.path() / "d").string(),
            log) == 0);

  CHECK(run("eval --n 1 --seed 2 --dump-images --no-dr --out " + (dir.path() / "e").string(), log) == 0);
  CHECK(fs::exists(dir.path() / "e" / "images" / "episode_2_t0_depth.pgm"));
}

TEST_CASE("usage and config errors exit nonzero") {
  testing::TempDir dir("cli_err");
  const fs::path log = dir.path() / "log.txt";
  CHECK(run("", log) != 0);
  CHECK(run("eval --n 1", log) != 0);
  CHECK(run("eval --suite nope --n 1 --out " + dir.path().string(), log) != 0);
  CHECK(run("eval --n 0 --out " + dir.path().string(), log) != 0);

  const fs::path bad = dir.path() / "bad.ini";
  std::ofstream(bad) << "[scene]\nno_such_key = 1\n";
  CHECK(run("eval --n 1 --config " + bad.string() + " --out " + (dir.path() / "x").string(), log) == 2);
  CHECK(testing::slurp(log).find("scene.no_such_key") != std::string::npos);

  const fs::path invalid = dir.path() / "invalid.ini";
  std::ofstream(invalid) << "[dsa]\nzoom = 999\n";
  CHECK(run("eval --n 1 --config " + invalid.string() + " --out " + (dir.path() / "y").string(), log) == 2);

  CHECK(run("eval --n 1 --policy replay --out " + (dir.path() / "z").string(), log) == 2);
  CHECK(run("stereo --left /nonexistent.pgm --right /nonexistent.pgm --out x.pgm", log) != 0);
}

TEST_CASE("synth-stereo, stereo and render") {
  testing::TempDir dir("cli_stereo");
  const fs::path log = dir.path() / "log.txt";
  REQUIRE(run("synth-stereo --height 120 --seed 3 --out " + dir.path().string(), log) == 0);
  const fs::path depth = dir.path() / "depth.pgm";
  REQUIRE(run("stereo --left " + (dir.path() / "left.pgm").string() + " --right " + (dir.path() / "right.pgm").string() +
                  " --out " + depth.string(),
              log) == 0);
  CHECK(testing::slurp(log).find("matched") != std::string::npos);
  const graspsim::Gray16 d = graspsim::read_pgm16(depth);
  const graspsim::Gray16 truth = graspsim::read_pgm16(dir.path() / "depth_truth.pgm");
  REQUIRE(d.width() == truth.width());
  int good = 0, matched = 0;
  for (std::size_t i = 0; i < d.data().size(); ++i) {
    if (d.data()[i] == 0) continue;
    ++matched;
    good += std::abs(static_cast<int>(d.data()[i]) - static_cast<int>(truth.data()[i])) <= 1;
  }
  CHECK(matched > 0);
  CHECK(good >= matched * 95 / 100);

  const fs::path frame = dir.path() / "frame";
  REQUIRE(run("render --seed 4 --out " + frame.string(), log) == 0);
  for (const char* name : {"dsa_depth.pgm", "dsa_mask.pgm", "dsa_state.pgm", "frame_left.pgm"}) {
    CHECK(fs::exists(frame / name));
  }
}
