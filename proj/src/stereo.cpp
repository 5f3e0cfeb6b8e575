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

#include "graspsim/stereo.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <vector>

#include "graspsim/errors.hpp"

namespace graspsim {

namespace {

constexpr std::int32_t kInvalid = std::numeric_limits<std::int32_t>::max();

/// Vertex of the symmetric V through three equally spaced costs with the
/// minimum in the middle.
double equiangular_offset(double cm, double c0, double cp) {
  const double rise = std::max(cm, cp) - c0;
  if (!(rise > 0.0)) return 0.0;
  return std::clamp((cm - cp) / (2.0 * rise), -0.5, 0.5);
}

}  // namespace

void MatcherConfig::validate() const {
  if (block < 3 || block % 2 == 0) throw ValidationError("matcher: block must be odd and >= 3");
  if (search_range < 0) throw ValidationError("matcher: search range must be non-negative");
  if (!(uniqueness_ratio > 0.0 && uniqueness_ratio <= 1.0)) {
    throw ValidationError("matcher: uniqueness ratio must be in (0, 1]");
  }
  if (lr_tolerance < 0) throw ValidationError("matcher: lr tolerance must be non-negative");
}

DisparityImage match_disparity(const Gray8& left, const Gray8& right, const MatcherConfig& cfg) {
  cfg.validate();
  if (!left.same_shape(right)) throw ValidationError("match_disparity: image sizes differ");
  const int w = left.width(), h = left.height();
  const int r = cfg.block / 2;
  const int nd = cfg.search_range + 1;
  DisparityImage out(w, h, kNoMatch);
  if (w < cfg.block || h < cfg.block) return out;

  const auto W = static_cast<std::size_t>(w);
  // colsum[d * W + x]: SAD of column x over the block rows, defined for x >= d.
  std::vector<std::int32_t> colsum(static_cast<std::size_t>(nd) * W, 0);
  std::vector<std::int32_t> cost(static_cast<std::size_t>(nd) * W, kInvalid);
  std::vector<int> right_best(W);

  auto add_row = [&](int y, int sign) {
    const auto lrow = left.row(y);
    const auto rrow = right.row(y);
    for (int d = 0; d < nd; ++d) {
      std::int32_t* cs = colsum.data() + static_cast<std::size_t>(d) * W;
      for (int x = d; x < w; ++x) {
        cs[x] += sign * std::abs(static_cast<int>(lrow[static_cast<std::size_t>(x)]) -
                                 static_cast<int>(rrow[static_cast<std::size_t>(x - d)]));
      }
    }
  };
  for (int y = 0; y < cfg.block - 1; ++y) add_row(y, +1);

  for (int y = r; y < h - r; ++y) {
    add_row(y + r, +1);
    if (y > r) add_row(y - r - 1, -1);

    // Horizontal box sums; valid where the left block starts at x - r >= d.
    for (int d = 0; d < nd; ++d) {
      const std::int32_t* cs = colsum.data() + static_cast<std::size_t>(d) * W;
      std::int32_t* c = cost.data() + static_cast<std::size_t>(d) * W;
      std::fill(c, c + w, kInvalid);
      const int first = d + r;
      if (first + r >= w) continue;
      std::int32_t acc = 0;
      for (int x = first - r; x <= first + r; ++x) acc += cs[x];
      c[first] = acc;
      for (int x = first + 1; x + r < w; ++x) {
        acc += cs[x + r] - cs[x - r - 1];
        c[x] = acc;
      }
    }
    auto at = [&](int d, int x) { return cost[static_cast<std::size_t>(d) * W + static_cast<std::size_t>(x)]; };

    // Best disparity from the right view, reusing the same costs.
    for (int xr = 0; xr < w; ++xr) {
      int best = -1;
      std::int32_t best_cost = kInvalid;
      for (int d = 0; d < nd && xr + d < w; ++d) {
        const std::int32_t c = at(d, xr + d);
        if (c < best_cost) {
          best_cost = c;
          best = d;
        }
      }
      right_best[static_cast<std::size_t>(xr)] = best;
    }

    auto orow = out.row(y);
    for (int x = r; x + r < w; ++x) {
      int best = -1;
      std::int32_t best_cost = kInvalid;
      const int dmax = std::min(nd - 1, x - r);
      for (int d = 0; d <= dmax; ++d) {
        const std::int32_t c = at(d, x);
        if (c < best_cost) {
          best_cost = c;
          best = d;
        }
      }
      if (best < 0) continue;
      std::int32_t second = kInvalid;
      for (int d = 0; d <= dmax; ++d) {
        if (std::abs(d - best) > 1) second = std::min(second, at(d, x));
      }
      if (second == kInvalid) continue;
      if (!(static_cast<double>(best_cost) < cfg.uniqueness_ratio * static_cast<double>(second))) continue;
      const int rb = right_best[static_cast<std::size_t>(x - best)];
      if (rb < 0 || std::abs(rb - best) > cfg.lr_tolerance) continue;

      // A winner on the last candidate is not a bracketed minimum.
      if (best == dmax) continue;

      // Sub-pixel offset from the V-shaped SAD cost around the winner, taken
      // in both reference views and averaged. The neighbour costs of the two
      // views differ only in the block-end columns, in opposite directions.
      double disp = best;
      if (best > 0) {
        const int xr = x - best;
        if (xr + best + 1 + r >= w) continue;
        const double c0 = best_cost;
        const double offset_left = equiangular_offset(at(best - 1, x), c0, at(best + 1, x));
        const double offset_right =
            equiangular_offset(at(best - 1, xr + best - 1), c0, at(best + 1, xr + best + 1));
        disp += 0.5 * (offset_left + offset_right);
      }
      orow[static_cast<std::size_t>(x)] = static_cast<float>(disp);
    }
  }
  return out;
}

DepthImage disparity_to_depth(const DisparityImage& w, const CameraModel& cam, double min_disparity) {
  cam.validate();
  DepthImage out(w.width(), w.height(), 0.0);
  const double fb = cam.focal_px * cam.baseline_mm;
  for (std::size_t i = 0; i < w.data().size(); ++i) {
    const double d = w.data()[i];
    if (d >= 0.0 && d > min_disparity) out.data()[i] = fb / d;
  }
  return out;
}

}  // namespace graspsim
