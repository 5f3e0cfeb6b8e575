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

#ifndef GRASPSIM_RNG_HPP_
#define GRASPSIM_RNG_HPP_

#include <cstdint>
#include <random>

namespace graspsim {

std::uint64_t splitmix64(std::uint64_t x);

/// Mixes a master seed with a stream id into an independent seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/**
 * Seeded generator with portable floating-point draws. The std::
 * distributions are implementation-defined, so draws are built directly on
 * the raw 64-bit engine output to keep replays identical across toolchains.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1).
  double canonical() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * canonical(); }
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace graspsim

#endif  // GRASPSIM_RNG_HPP_
