// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <vector>

#include "slf/errors.hpp"
#include "slf/point_cloud.hpp"

namespace slf {

/// Interleaves depth bits of (x, y, z) with x in the least significant slot
/// of each triple, so ascending codes pair along x, then y, then z.
uint64_t morton_encode(uint32_t x, uint32_t y, uint32_t z, int depth);
std::array<uint32_t, 3> morton_decode(uint64_t code, int depth);

/// Occupied cells of a 2^depth grid, Morton-sorted and unique, plus the map
/// from original points to their voxel.
struct VoxelCloud {
  int depth = 0;
  std::vector<std::array<uint32_t, 3>> coords;  // Morton-ascending, unique
  std::vector<int> point_map;                   // original point -> voxel index

  int voxel_count() const { return static_cast<int>(coords.size()); }
  std::vector<uint64_t> codes() const;
};

/// Min-max normalizes positions into [0, 2^depth)^3 (uniform scale over the
/// widest axis), floors to integer cells and merges duplicates.
VoxelCloud voxelize(const PointCloud& cloud, int depth);

/// Per-voxel mean of a per-point attribute matrix (rows = points), following
/// the voxelizer's merge policy.
Eigen::MatrixXd average_attributes(const VoxelCloud& vox,
                                   const Eigen::MatrixXd& per_point);

}  // namespace slf
