// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "slf/voxel.hpp"

namespace slf {

/// Breadth-first octree occupancy coding: one child-mask byte per occupied
/// internal node, children in Morton order. Lossless at voxel precision;
/// depth travels in the enclosing stream header.
std::vector<uint8_t> encode_geometry(const VoxelCloud& vox);
std::vector<std::array<uint32_t, 3>> decode_geometry(std::span<const uint8_t> bytes,
                                                     int depth);

}  // namespace slf
