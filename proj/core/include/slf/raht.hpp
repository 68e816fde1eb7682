// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "slf/errors.hpp"
#include "slf/voxel.hpp"

namespace slf {

/// One weighted 2-point Haar butterfly between sibling nodes. Nodes are ids
/// into a value array: voxels occupy [0, voxel_count), merged nodes follow.
struct RahtStep {
  int child_a = 0;  // lower Morton code
  int child_b = 0;
  int parent = 0;
  double sqrt_wa = 0.0;
  double sqrt_wb = 0.0;
  double sqrt_sum = 0.0;
};

/// Merge schedule of the region-adaptive hierarchical transform over one
/// voxel set: bottom-up, pairing along x, then y, then z per level. Both
/// encoder and decoder derive it from geometry alone.
struct RahtPlan {
  int voxel_count = 0;
  int root = 0;
  std::vector<RahtStep> steps;  // exactly voxel_count - 1 entries

  static RahtPlan build(const VoxelCloud& vox);
};

/// Transform coefficients for one attribute plane: output[0] is the root DC,
/// followed by AC terms in merge order. Orthonormal (energy preserving).
std::vector<double> raht_forward(const RahtPlan& plan, std::span<const double> plane);
std::vector<double> raht_forward(const VoxelCloud& vox, std::span<const double> plane);

/// Exact inverse of raht_forward over the same plan.
std::vector<double> raht_inverse(const RahtPlan& plan, std::span<const double> coeffs);
std::vector<double> raht_inverse(const VoxelCloud& vox, std::span<const double> coeffs);

}  // namespace slf
