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

#include "graspsim/dsa.hpp"

#include <algorithm>
#include <cmath>

#include "graspsim/errors.hpp"

namespace graspsim {

namespace {

constexpr int kBandStride = 21;

std::uint8_t saturating_add(std::uint8_t a, std::uint8_t b) {
  const int s = a + b;
  return static_cast<std::uint8_t>(s > 255 ? 255 : s);
}

void check_window(const ZoomWindow& w, int n) {
  if (w.side <= 0 || w.x0 < 0 || w.y0 < 0 || w.x0 + w.side > n || w.y0 + w.side > n) {
    throw ValidationError("dsa: zoom window outside the ortho plane");
  }
}

}  // namespace

void DsaConfig::validate(int voxel_resolution) const {
  if (zoom <= 0 || zoom > voxel_resolution) throw ConfigError("dsa: zoom must be in (0, n]");
  if (state_band_rows <= 0 || state_band_rows > kBandStride) {
    throw ConfigError("dsa: state band rows must be in (0, 21]");
  }
}

ZoomWindow make_zoom(const std::optional<Vec3>& gripper_centroid, int n, int zoom) {
  if (!gripper_centroid) throw ValidationError("make_zoom: gripper centroid absent");
  if (zoom <= 0 || zoom > n) throw ValidationError("make_zoom: side must be in (0, n]");
  auto origin = [&](double c) {
    const int center = static_cast<int>(std::floor(c * n + 0.5));
    return std::clamp(center - zoom / 2, 0, n - zoom);
  };
  return {origin(gripper_centroid->x()), origin(gripper_centroid->y()), zoom};
}

ZoomWindow full_frame_window(int n) { return {0, 0, n}; }

Gray8 encode_depth_layer(const std::vector<const OrthoProjection*>& projections,
                         double gripper_cz, int n, int zoom, const ZoomWindow& window) {
  check_window(window, n);
  if (zoom <= 0) throw ValidationError("encode_depth_layer: zoom must be positive");
  Gray8 out(kDsaSize, kDsaSize, 0);
  const double lo = gripper_cz * n - 0.5 * zoom;
  const double hi = gripper_cz * n + 0.5 * zoom;
  for (const OrthoProjection* proj : projections) {
    if (proj->depth.width() != n || proj->depth.height() != n) {
      throw ValidationError("encode_depth_layer: projection size differs from n");
    }
    for (int v = 0; v < kDsaSize; ++v) {
      const int sy = resize_source(window.y0, window.side, v);
      for (int u = 0; u < kDsaSize; ++u) {
        const int sx = resize_source(window.x0, window.side, u);
        const std::uint16_t stored = proj->depth.at(sx, sy);
        if (stored == 0) continue;
        const double z = std::clamp(static_cast<double>(stored - 1), lo, hi);
        out.at(u, v) = saturating_add(out.at(u, v), round_to_u8(255.0 * (z - lo) / (hi - lo)));
      }
    }
  }
  return out;
}

Gray8 encode_mask_layer(const std::vector<const Gray8*>& masks,
                        const std::vector<std::uint8_t>& codes, const ZoomWindow& window) {
  if (masks.size() != codes.size()) throw ValidationError("encode_mask_layer: one code per mask");
  Gray8 out(kDsaSize, kDsaSize, 0);
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const Gray8& m = *masks[i];
    if (m.width() != m.height()) throw ValidationError("encode_mask_layer: masks must be square");
    check_window(window, m.width());
    for (int v = 0; v < kDsaSize; ++v) {
      const int sy = resize_source(window.y0, window.side, v);
      for (int u = 0; u < kDsaSize; ++u) {
        if (m.at(resize_source(window.x0, window.side, u), sy)) {
          out.at(u, v) = saturating_add(out.at(u, v), codes[i]);
        }
      }
    }
  }
  return out;
}

Gray8 encode_state_layer(const SystemStates& s, int band_rows) {
  if (band_rows <= 0 || band_rows > kBandStride) {
    throw ValidationError("encode_state_layer: band rows must be in (0, 21]");
  }
  Gray8 out(kDsaSize, kDsaSize, 0);
  for (int i = 0; i < 3; ++i) {
    const double si = s.s[static_cast<std::size_t>(i)];
    if (!(si >= 0.0 && si <= 1.0)) throw ValidationError("encode_state_layer: state outside [0, 1]");
    const std::uint8_t value = round_to_u8(255.0 * si);
    for (int y = kBandStride * i; y < kBandStride * i + band_rows; ++y) {
      for (auto& px : out.row(y)) px = value;
    }
  }
  return out;
}

DsaImage assemble(Gray8 depth, Gray8 mask, Gray8 state) {
  for (const Gray8* g : {&depth, &mask, &state}) {
    if (g->width() != kDsaSize || g->height() != kDsaSize) {
      throw ValidationError("assemble: layers must be 64 x 64");
    }
  }
  return {{std::move(depth), std::move(mask), std::move(state)}};
}

DsaImage encode_dsa(const PerceptionResult& perception, const SystemStates& sys, int n,
                    const DsaConfig& cfg) {
  const auto& gc = perception.gripper.centroid;
  const ZoomWindow window = gc ? make_zoom(gc, n, cfg.zoom) : full_frame_window(n);
  const double cz = gc ? gc->z() : 0.5;
  Gray8 depth = encode_depth_layer({&perception.gripper.ortho, &perception.target.ortho}, cz, n,
                                   cfg.zoom, window);
  Gray8 mask = encode_mask_layer({&perception.gripper.ortho.mask, &perception.target.ortho.mask},
                                 {cfg.gripper_code, cfg.target_code}, window);
  return assemble(std::move(depth), std::move(mask), encode_state_layer(sys, cfg.state_band_rows));
}

std::uint64_t dsa_digest(const DsaImage& img) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Gray8& layer : img.layers) {
    for (std::uint8_t b : layer.data()) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

void write_dsa(const std::filesystem::path& dir, const std::string& stem, const DsaImage& img) {
  std::filesystem::create_directories(dir);
  write_pgm8(dir / (stem + "_depth.pgm"), img.layers[0]);
  write_pgm8(dir / (stem + "_mask.pgm"), img.layers[1]);
  write_pgm8(dir / (stem + "_state.pgm"), img.layers[2]);
}

}  // namespace graspsim
