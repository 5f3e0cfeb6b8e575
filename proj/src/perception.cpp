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

#include "graspsim/perception.hpp"

#include <algorithm>
#include <cmath>

#include "graspsim/errors.hpp"

namespace graspsim {

PointCloudSegment depth_to_points(const DepthImage& depth, const Gray8& mask,
                                  const CameraModel& cam, const Workspace& workspace,
                                  int object_id) {
  if (!depth.same_shape(mask)) throw ValidationError("depth_to_points: depth and mask shapes differ");
  cam.validate();
  const Workspace bounds = workspace.inflated(kPointBoundsInflation);
  const Mat3& r = cam.pose.rotation();
  const Vec3& l = cam.pose.translation();
  PointCloudSegment seg{object_id, {}};
  for (int y = 0; y < depth.height(); ++y) {
    const auto drow = depth.row(y);
    const auto mrow = mask.row(y);
    for (int x = 0; x < depth.width(); ++x) {
      const double d = drow[static_cast<std::size_t>(x)];
      if (!mrow[static_cast<std::size_t>(x)] || !(d > 0.0)) continue;
      const PixelCoord p = cam.from_index(x, y);
      const Vec3 q = r * Vec3(cam.pixel_scale_mm * p.x, cam.pixel_scale_mm * p.y, d) + l;
      if (bounds.contains(q)) seg.points.push_back(q);
    }
  }
  return seg;
}

void VoxelGridSpec::validate() const {
  bounds.validate();
  if (n < 1 || n > 65534) throw ConfigError("voxel grid: resolution must be in [1, 65534]");
}

VoxelSet::VoxelSet(std::vector<VoxelIndex> voxels) : voxels_(std::move(voxels)) {
  std::sort(voxels_.begin(), voxels_.end());
  voxels_.erase(std::unique(voxels_.begin(), voxels_.end()), voxels_.end());
}

bool VoxelSet::contains(const VoxelIndex& v) const {
  return std::binary_search(voxels_.begin(), voxels_.end(), v);
}

VoxelizeResult voxelize(const PointCloudSegment& seg, const VoxelGridSpec& spec) {
  spec.validate();
  VoxelizeResult out;
  const Vec3& lo = spec.bounds.min_mm;
  const Vec3 ext = spec.bounds.extent();
  std::vector<VoxelIndex> idx;
  idx.reserve(seg.points.size());
  for (const Vec3& q : seg.points) {
    if (!spec.bounds.contains(q)) {
      ++out.dropped;
      continue;
    }
    int v[3];
    for (int a = 0; a < 3; ++a) {
      const double f = std::floor(spec.n * (q[a] - lo[a]) / ext[a]);
      v[a] = std::clamp(static_cast<int>(f), 0, spec.n - 1);
    }
    idx.push_back({v[0], v[1], v[2]});
  }
  out.occupied = VoxelSet(std::move(idx));
  return out;
}

VoxelSet filter_voxels(const VoxelSet& voxels, double radius_vox, int min_neighbors) {
  if (!(radius_vox > 0.0)) throw ValidationError("filter_voxels: radius must be positive");
  const int reach = static_cast<int>(std::floor(radius_vox));
  const double r2 = radius_vox * radius_vox;
  std::vector<VoxelIndex> offsets;
  for (int dx = -reach; dx <= reach; ++dx) {
    for (int dy = -reach; dy <= reach; ++dy) {
      for (int dz = -reach; dz <= reach; ++dz) {
        if ((dx || dy || dz) && dx * dx + dy * dy + dz * dz <= r2) offsets.push_back({dx, dy, dz});
      }
    }
  }
  std::vector<VoxelIndex> kept;
  for (const VoxelIndex& v : voxels.voxels()) {
    int count = 0;
    for (const VoxelIndex& o : offsets) {
      if (count >= min_neighbors) break;
      if (voxels.contains({v.x + o.x, v.y + o.y, v.z + o.z})) ++count;
    }
    if (count >= min_neighbors) kept.push_back(v);
  }
  return VoxelSet(std::move(kept));
}

std::optional<Vec3> centroids(const VoxelSet& voxels, int n) {
  if (voxels.empty()) return std::nullopt;
  double sx = 0.0, sy = 0.0, sz = 0.0;
  for (const VoxelIndex& v : voxels.voxels()) {
    sx += v.x;
    sy += v.y;
    sz += v.z;
  }
  const double count = static_cast<double>(voxels.size());
  return Vec3(sx / count / n, sy / count / n, sz / count / n);
}

std::optional<int> OrthoProjection::z_at(int x, int y) const {
  if (!mask.at(x, y)) return std::nullopt;
  return static_cast<int>(depth.at(x, y)) - 1;
}

OrthoProjection ortho_project(const VoxelSet& voxels, int n, bool top_surface) {
  OrthoProjection out{Gray16(n, n, 0), Gray8(n, n, 0)};
  for (const VoxelIndex& v : voxels.voxels()) {
    if (v.x < 0 || v.y < 0 || v.x >= n || v.y >= n) continue;
    const auto stored = static_cast<std::uint16_t>(v.z + 1);
    std::uint16_t& d = out.depth.at(v.x, v.y);
    if (d == 0 || (top_surface ? stored > d : stored < d)) d = stored;
    out.mask.at(v.x, v.y) = 1;
  }
  return out;
}

void PerceptionConfig::validate() const {
  if (voxel_resolution < 1 || voxel_resolution > 65534) {
    throw ConfigError("perception: voxel resolution must be in [1, 65534]");
  }
  if (!(filter_radius_vox > 0.0)) throw ConfigError("perception: filter radius must be positive");
  if (filter_min_neighbors < 0) throw ConfigError("perception: min neighbours must be >= 0");
}

ObjectPerception perceive_object(const DepthImage& depth, const Gray8& mask, const CameraModel& cam,
                                 const Workspace& workspace, const PerceptionConfig& cfg) {
  ObjectPerception out;
  const PointCloudSegment seg = depth_to_points(depth, mask, cam, workspace);
  out.points = seg.points.size();
  VoxelizeResult vox = voxelize(seg, {workspace, cfg.voxel_resolution});
  out.dropped = vox.dropped;
  out.voxels = filter_voxels(vox.occupied, cfg.filter_radius_vox, cfg.filter_min_neighbors);
  out.centroid = centroids(out.voxels, cfg.voxel_resolution);
  out.ortho = ortho_project(out.voxels, cfg.voxel_resolution, cfg.ortho_top_surface);
  return out;
}

PerceptionResult perceive(const DepthImage& depth, const MaskSet& masks, const CameraModel& cam,
                          const Workspace& workspace, const PerceptionConfig& cfg) {
  cfg.validate();
  return {perceive_object(depth, masks.gripper, cam, workspace, cfg),
          perceive_object(depth, masks.target, cam, workspace, cfg)};
}

void dump_ortho(const std::filesystem::path& dir, const std::string& stem,
                const OrthoProjection& proj) {
  std::filesystem::create_directories(dir);
  write_pgm16(dir / (stem + "_ortho_depth.pgm"), proj.depth);
  write_pgm8(dir / (stem + "_ortho_mask.pgm"), mask_to_gray8(proj.mask));
}

}  // namespace graspsim
