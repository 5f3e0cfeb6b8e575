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

#include <cmath>
#include <limits>

#include "doctest.h"
#include "graspsim/replay.hpp"
#include "graspsim/rng.hpp"
#include "support.hpp"

using namespace graspsim;

namespace {

double awkward(Rng& rng) {
  switch (rng.below(5)) {
    case 0: return rng.uniform(-1, 1);
    case 1: return std::ldexp(rng.uniform(-1, 1), -1000);
    case 2: return 0.1 * static_cast<double>(rng.below(30));
    case 3: return -0.0;
    default: return rng.uniform(-1e6, 1e6);
  }
}

std::optional<Vec3> maybe_vec(Rng& rng) {
  if (rng.below(6) == 0) return std::nullopt;
  return Vec3(awkward(rng), awkward(rng), awkward(rng));
}

EpisodeRecord random_record(Rng& rng) {
  EpisodeRecord r;
  r.seed = rng.next_u64();
  r.fingerprint = rng.below(4) ? "0123456789abcdef" : "";
  r.object = kAllObjectKinds[rng.below(4)];
  r.scale = rng.uniform(0.5, 2.0);
  const int n = static_cast<int>(rng.below(81));
  for (int t = 0; t < n; ++t) {
    StepRecord s;
    s.t = t;
    s.phase = static_cast<Phase>(rng.below(3));
    s.action = static_cast<int>(rng.below(10)) - 1;
    for (double& v : s.command.v) v = rng.uniform(-1, 1);
    const double rewards[4] = {1.0, -0.1, -0.01, -0.001};
    s.reward = rewards[rng.below(4)];
    s.state = static_cast<TaskState>(rng.below(4));
    for (double& v : s.sys.s) v = rng.canonical();
    s.gripper_c = maybe_vec(rng);
    s.target_c = maybe_vec(rng);
    s.correction = rng.below(2);
    s.clamped = rng.below(2);
    s.below_safe_height = rng.below(2);
    s.target_lost = rng.below(2);
    s.jaw_closed = rng.below(2);
    s.grasp_ok = rng.below(2);
    s.dsa_digest = rng.next_u64();
    s.image_ref = rng.below(2) ? "-" : "images/" + std::to_string(t) + "_dsa";
    r.steps.push_back(s);
  }
  r.terminated = rng.below(2);
  r.horizon = n;
  r.success = rng.below(2);
  r.discounted_return = awkward(rng);
  return r;
}

std::string minimal() {
  return "graspsim-replay version=1 fingerprint=- seed=3 object=block scale=1\n"
         "step t=0 phase=begin action=-1 cmd=0,0,0,0,1 reward=-0.01 state=normal sys=0,1,0 "
         "gc=- tc=0.5,0.5,0.5 correction=0 clamped=0 safe=0 lost=1 closed=0 grasp=0 dsa=00000000000000ff image=-\n"
         "end steps=1 terminated=0 H=1 success=0 return=-0.01\n";
}

int parse_error_line(const std::string& text) {
  try {
    parse_replay(text);
  } catch (const ReplayParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("round trip on random records") {
  Rng rng(77);
  testing::TempDir dir("replay");
  for (int i = 0; i < 100; ++i) {
    const EpisodeRecord r = random_record(rng);
    const EpisodeRecord back = parse_replay(format_replay(r));
    REQUIRE(back == r);
    const auto path = dir.path() / "sub" / replay_filename(r.seed);
    write_replay(r, path);
    REQUIRE(read_replay(path) == r);
  }
  CHECK(std::signbit(parse_replay(format_replay(random_record(rng))).scale) == false);
}

TEST_CASE("minimal replay parses") {
  const EpisodeRecord r = parse_replay(minimal());
  CHECK(r.seed == 3);
  CHECK(r.fingerprint.empty());
  CHECK(r.object == ObjectKind::Block);
  REQUIRE(r.steps.size() == 1);
  CHECK_FALSE(r.steps[0].gripper_c);
  CHECK(r.steps[0].target_c == Vec3(0.5, 0.5, 0.5));
  CHECK(r.steps[0].target_lost);
  CHECK(r.steps[0].dsa_digest == 0xff);
  CHECK(format_replay(r) == minimal());
  CHECK(replay_filename(12) == "episode_12.replay");
}

TEST_CASE("truncated and corrupt files report the line") {
  const std::string text = minimal();
  CHECK(parse_error_line("") == 1);
  CHECK(parse_error_line(text.substr(0, text.find("end "))) == 3);
  // Cut mid-step: the partial line is missing fields.
  CHECK(parse_error_line(text.substr(0, text.find(" grasp="))) == 2);
  std::string bad = text;
  bad.replace(bad.find("reward=-0.01"), 12, "reward=x");
  CHECK(parse_error_line(bad) == 2);
  bad = text;
  bad.replace(bad.find("phase=begin"), 11, "phase=late");
  CHECK(parse_error_line(bad) == 2);
  bad = text;
  bad.replace(bad.find("steps=1"), 7, "steps=2");
  CHECK(parse_error_line(bad) == 3);
  CHECK(parse_error_line(text + "step t=1\n") == 4);
  CHECK(parse_error_line(text + "garbage\n") == 4);
  bad = text;
  bad.replace(bad.find("action=-1"), 9, "action=9");
  CHECK(parse_error_line(bad) == 2);
  bad = text;
  bad.replace(bad.find("closed=0"), 8, "closed=0 closed=1");
  CHECK(parse_error_line(bad) == 2);
  CHECK(parse_error_line("hello version=1\n") == 1);
  CHECK_THROWS_AS(read_replay("/nonexistent/episode_1.replay"), std::runtime_error);
}

TEST_CASE("version mismatch is an explicit incompatibility") {
  std::string text = minimal();
  text.replace(text.find("version=1"), 9, "version=2");
  CHECK_THROWS_AS(parse_replay(text), ReplayVersionError);
  try {
    parse_replay(text);
  } catch (const ReplayVersionError& e) {
    CHECK(std::string(e.what()).find("version=2") != std::string::npos);
  }
}
