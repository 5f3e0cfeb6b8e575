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

#ifndef GRASPSIM_PERCEPTION_HPP_
#define GRASPSIM_PERCEPTION_HPP_

#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include "graspsim/geometry.hpp"
#include "graspsim/image.hpp"
#include "graspsim/render.hpp"
#include "graspsim/scene.hpp"

namespace graspsim {

struct PointCloudSegment {
  int object_id = 0;
  std::vector<Vec3> points;
};

/// Fraction of the workspace extent by which depth_to_points grows the
/// accepted region on every side.
inline constexpr double kPointBoundsInflation = 0.1;

/**
 * Unprojects every pixel with mask != 0 and depth > 0. Points outside the
 * workspace inflated by kPointBoundsInflation are dropped. Throws
 * ValidationError when depth and mask shapes differ.
 */
PointCloudSegment depth_to_points(const DepthImage& depth, const Gray8& mask,
                                  const CameraModel& cam, const Workspace& workspace,
                                  int object_id = 0);

struct VoxelGridSpec {
  Workspace bounds;
  int n = 200;

  void validate() const;
};

struct VoxelIndex {
  int x = 0;
  int y = 0;
  int z = 0;
  auto operator<=>(const VoxelIndex&) const = default;
};

/// Sorted, duplicate-free set of occupied voxels.
class VoxelSet {
 public:
  VoxelSet() = default;
  /// Sorts and deduplicates.
  explicit VoxelSet(std::vector<VoxelIndex> voxels);

  const std::vector<VoxelIndex>& voxels() const { return voxels_; }
  std::size_t size() const { return voxels_.size(); }
  bool empty() const { return voxels_.empty(); }
  bool contains(const VoxelIndex& v) const;
  bool operator==(const VoxelSet&) const = default;

 private:
  std::vector<VoxelIndex> voxels_;
};

struct VoxelizeResult {
  VoxelSet occupied;
  std::size_t dropped = 0;  // points outside the grid bounds
};

/// index = floor(n (q - min) / (max - min)) clamped to [0, n-1]; points
/// outside [min, max] are dropped.
VoxelizeResult voxelize(const PointCloudSegment& seg, const VoxelGridSpec& spec);

/// Keeps voxels with at least min_neighbors other occupied voxels within
/// Euclidean index distance radius_vox. Throws ValidationError for radius <= 0.
VoxelSet filter_voxels(const VoxelSet& voxels, double radius_vox, int min_neighbors);

/// Mean voxel index per axis divided by n; empty when the set is empty.
std::optional<Vec3> centroids(const VoxelSet& voxels, int n);

/**
 * Orthographic projection along voxel z. depth stores z + 1 of the selected
 * voxel so that 0 can mark empty columns; the selected voxel is the lowest
 * in the column unless top_surface is set.
 */
struct OrthoProjection {
  Gray16 depth;
  Gray8 mask;

  /// Selected z index of a column, or empty.
  std::optional<int> z_at(int x, int y) const;
};

OrthoProjection ortho_project(const VoxelSet& voxels, int n, bool top_surface = false);

struct PerceptionConfig {
  int voxel_resolution = 200;
  double filter_radius_vox = 2.0;
  int filter_min_neighbors = 2;
  bool ortho_top_surface = false;

  void validate() const;
};

struct ObjectPerception {
  VoxelSet voxels;
  std::optional<Vec3> centroid;
  OrthoProjection ortho;
  std::size_t points = 0;
  std::size_t dropped = 0;
};

struct PerceptionResult {
  ObjectPerception gripper;
  ObjectPerception target;
};

ObjectPerception perceive_object(const DepthImage& depth, const Gray8& mask, const CameraModel& cam,
                                 const Workspace& workspace, const PerceptionConfig& cfg);

PerceptionResult perceive(const DepthImage& depth, const MaskSet& masks, const CameraModel& cam,
                          const Workspace& workspace, const PerceptionConfig& cfg);

void dump_ortho(const std::filesystem::path& dir, const std::string& stem,
                const OrthoProjection& proj);

}  // namespace graspsim

#endif  // GRASPSIM_PERCEPTION_HPP_
