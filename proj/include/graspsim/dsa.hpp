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

#ifndef GRASPSIM_DSA_HPP_
#define GRASPSIM_DSA_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "graspsim/geometry.hpp"
#include "graspsim/image.hpp"
#include "graspsim/perception.hpp"
#include "graspsim/task.hpp"

namespace graspsim {

inline constexpr int kDsaSize = 64;

struct DsaConfig {
  int zoom = 60;                   // N_zoom, in voxels
  std::uint8_t gripper_code = 140;  // e_1
  std::uint8_t target_code = 70;    // e_2
  int state_band_rows = 10;         // N_sys

  void validate(int voxel_resolution) const;
};

/// Square crop [x0, x0 + side) x [y0, y0 + side) of the n x n ortho plane.
struct ZoomWindow {
  int x0 = 0;
  int y0 = 0;
  int side = 0;
  bool operator==(const ZoomWindow&) const = default;
};

/// Window of the given side centred on round(c * n), shifted to fit inside
/// [0, n). Throws ValidationError when the centroid is absent or side is
/// outside (0, n].
ZoomWindow make_zoom(const std::optional<Vec3>& gripper_centroid, int n, int zoom);

ZoomWindow full_frame_window(int n);

/// Nearest-neighbour source index for output pixel dst of a crop.
inline int resize_source(int origin, int side, int dst) {
  return origin + (2 * dst + 1) * side / (2 * kDsaSize);
}

/**
 * Truncates each projection's z to the band c_z n +- zoom/2, scales the band
 * to [0, 255], crops and resizes to 64 x 64, and sums with saturation. Empty
 * columns stay 0.
 */
Gray8 encode_depth_layer(const std::vector<const OrthoProjection*>& projections,
                         double gripper_cz, int n, int zoom, const ZoomWindow& window);

Gray8 encode_mask_layer(const std::vector<const Gray8*>& masks,
                        const std::vector<std::uint8_t>& codes, const ZoomWindow& window);

/// Band i covers rows [21 i, 21 i + band_rows) and holds round(255 s_i).
Gray8 encode_state_layer(const SystemStates& s, int band_rows = 10);

/// Channels in order: depth, mask, state.
struct DsaImage {
  std::array<Gray8, 3> layers;
  bool operator==(const DsaImage&) const = default;
};

/// Throws ValidationError unless all layers are 64 x 64.
DsaImage assemble(Gray8 depth, Gray8 mask, Gray8 state);

/// Full encoding of one frame; falls back to the full frame window when the
/// gripper centroid is absent.
DsaImage encode_dsa(const PerceptionResult& perception, const SystemStates& sys, int n,
                    const DsaConfig& cfg);

/// FNV-1a over the three layers.
std::uint64_t dsa_digest(const DsaImage& img);

/// Writes <stem>_depth.pgm, <stem>_mask.pgm, <stem>_state.pgm.
void write_dsa(const std::filesystem::path& dir, const std::string& stem, const DsaImage& img);

inline std::uint8_t round_to_u8(double v) {
  const double r = v + 0.5;
  return r <= 0.0 ? 0 : r >= 255.0 ? 255 : static_cast<std::uint8_t>(r);
}

}  // namespace graspsim

#endif  // GRASPSIM_DSA_HPP_
