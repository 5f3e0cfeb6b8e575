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

#include "graspsim/replay.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace graspsim {

namespace {

constexpr const char* kMagic = "graspsim-replay";

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string join(const double* v, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) out += (i ? "," : "") + g17(v[i]);
  return out;
}

std::string centroid_field(const std::optional<Vec3>& c) {
  if (!c) return "-";
  const double xs[3] = {c->x(), c->y(), c->z()};
  return join(xs, 3);
}

/// key=value tokens of one line after the leading tag.
class Fields {
 public:
  Fields(const std::string& line, int lineno, const std::set<std::string>& allowed) : line_(lineno) {
    std::istringstream ss(line);
    std::string tok;
    ss >> tag_;
    while (ss >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos || eq == 0) fail("malformed field '" + tok + "'");
      const std::string key = tok.substr(0, eq);
      if (!allowed.count(key)) fail("unknown field '" + key + "'");
      if (!values_.emplace(key, tok.substr(eq + 1)).second) fail("duplicate field '" + key + "'");
    }
    for (const auto& k : allowed) {
      if (!values_.count(k)) fail("missing field '" + k + "'");
    }
  }

  const std::string& tag() const { return tag_; }
  const std::string& str(const std::string& key) const { return values_.at(key); }

  double num(const std::string& key) const { return parse_double(str(key), key); }

  long long integer(const std::string& key) const {
    const std::string& s = str(key);
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0' || errno) fail("bad integer for '" + key + "'");
    return v;
  }

  std::uint64_t u64(const std::string& key, int base = 10) const {
    const std::string& s = str(key);
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(s.c_str(), &end, base);
    if (s.empty() || s[0] == '-' || *end != '\0' || errno) fail("bad unsigned value for '" + key + "'");
    return v;
  }

  bool flag(const std::string& key) const {
    const std::string& s = str(key);
    if (s == "1") return true;
    if (s == "0") return false;
    fail("bad flag for '" + key + "'");
  }

  std::vector<double> list(const std::string& key, std::size_t n) const {
    std::vector<double> out;
    std::stringstream ss(str(key));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(item, key));
    if (out.size() != n) fail("expected " + std::to_string(n) + " values for '" + key + "'");
    return out;
  }

  std::optional<Vec3> centroid(const std::string& key) const {
    if (str(key) == "-") return std::nullopt;
    const auto v = list(key, 3);
    return Vec3(v[0], v[1], v[2]);
  }

  [[noreturn]] void fail(const std::string& what) const { throw ReplayParseError(line_, what); }

 private:
  double parse_double(const std::string& s, const std::string& key) const {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') fail("bad number for '" + key + "'");
    return v;
  }

  int line_;
  std::string tag_;
  std::map<std::string, std::string> values_;
};

template <typename Fn>
auto converting(int lineno, Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw ReplayParseError(lineno, e.what());
  }
}

}  // namespace

std::string format_replay(const EpisodeRecord& r) {
  std::ostringstream out;
  out << kMagic << " version=" << kReplayVersion << " fingerprint=" << (r.fingerprint.empty() ? "-" : r.fingerprint)
      << " seed=" << r.seed << " object=" << to_string(r.object) << " scale=" << g17(r.scale) << "\n";
  for (const StepRecord& s : r.steps) {
    out << "step t=" << s.t << " phase=" << to_string(s.phase) << " action=" << s.action
        << " cmd=" << join(s.command.v.data(), 5) << " reward=" << g17(s.reward)
        << " state=" << to_string(s.state) << " sys=" << join(s.sys.s.data(), 3)
        << " gc=" << centroid_field(s.gripper_c) << " tc=" << centroid_field(s.target_c)
        << " correction=" << s.correction << " clamped=" << s.clamped
        << " safe=" << s.below_safe_height << " lost=" << s.target_lost
        << " closed=" << s.jaw_closed << " grasp=" << s.grasp_ok
        << " dsa=" << hex64(s.dsa_digest) << " image=" << (s.image_ref.empty() ? "-" : s.image_ref)
        << "\n";
  }
  out << "end steps=" << r.steps.size() << " terminated=" << r.terminated << " H=" << r.horizon
      << " success=" << r.success << " return=" << g17(r.discounted_return) << "\n";
  return out.str();
}

EpisodeRecord parse_replay(const std::string& text) {
  static const std::set<std::string> kHeader = {"version", "fingerprint", "seed", "object", "scale"};
  static const std::set<std::string> kStep = {"t", "phase", "action", "cmd", "reward", "state",
                                              "sys", "gc", "tc", "correction", "clamped", "safe",
                                              "lost", "closed", "grasp", "dsa", "image"};
  static const std::set<std::string> kFooter = {"steps", "terminated", "H", "success", "return"};

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  EpisodeRecord r;

  if (!std::getline(in, line)) throw ReplayParseError(1, "empty file");
  ++lineno;
  {
    std::istringstream probe(line);
    std::string magic, version;
    probe >> magic >> version;
    if (magic != kMagic) throw ReplayParseError(lineno, "not a graspsim replay");
    if (version != "version=" + std::to_string(kReplayVersion)) {
      throw ReplayVersionError("replay version mismatch: file has '" + version + "', reader supports version=" +
                               std::to_string(kReplayVersion));
    }
    const Fields h(line, lineno, kHeader);
    r.fingerprint = h.str("fingerprint") == "-" ? "" : h.str("fingerprint");
    r.seed = h.u64("seed");
    r.object = converting(lineno, [&] { return object_kind_from_string(h.str("object")); });
    r.scale = h.num("scale");
  }

  bool footer = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (footer) throw ReplayParseError(lineno, "content after footer");
    if (line.rfind("step ", 0) == 0) {
      const Fields f(line, lineno, kStep);
      StepRecord s;
      s.t = static_cast<int>(f.integer("t"));
      s.phase = converting(lineno, [&] { return phase_from_string(f.str("phase")); });
      s.action = static_cast<int>(f.integer("action"));
      if (s.action < -1 || s.action >= kNumDiscreteActions) f.fail("action out of range");
      const auto cmd = f.list("cmd", 5);
      for (std::size_t i = 0; i < 5; ++i) s.command.v[i] = cmd[i];
      s.reward = f.num("reward");
      s.state = converting(lineno, [&] { return task_state_from_string(f.str("state")); });
      const auto sys = f.list("sys", 3);
      for (std::size_t i = 0; i < 3; ++i) s.sys.s[i] = sys[i];
      s.gripper_c = f.centroid("gc");
      s.target_c = f.centroid("tc");
      s.correction = f.flag("correction");
      s.clamped = f.flag("clamped");
      s.below_safe_height = f.flag("safe");
      s.target_lost = f.flag("lost");
      s.jaw_closed = f.flag("closed");
      s.grasp_ok = f.flag("grasp");
      s.dsa_digest = f.u64("dsa", 16);
      s.image_ref = f.str("image");
      r.steps.push_back(std::move(s));
    } else if (line.rfind("end ", 0) == 0 || line == "end") {
      const Fields f(line, lineno, kFooter);
      if (f.integer("steps") != static_cast<long long>(r.steps.size())) {
        f.fail("footer step count does not match the step lines");
      }
      r.terminated = f.flag("terminated");
      r.horizon = static_cast<int>(f.integer("H"));
      r.success = f.flag("success");
      r.discounted_return = f.num("return");
      footer = true;
    } else {
      throw ReplayParseError(lineno, "unrecognised line");
    }
  }
  if (!footer) throw ReplayParseError(lineno + 1, "missing footer (truncated file?)");
  return r;
}

void write_replay(const EpisodeRecord& record, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write replay: " + path.string());
  out << format_replay(record);
  if (!out) throw std::runtime_error("failed writing replay: " + path.string());
}

EpisodeRecord read_replay(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open replay: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_replay(ss.str());
}

std::string replay_filename(std::uint64_t seed) { return "episode_" + std::to_string(seed) + ".replay"; }

}  // namespace graspsim
