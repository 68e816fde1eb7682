// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <vector>

#include "slf/errors.hpp"

namespace slf {

/// Surface samples in world units. Normals, when present, are unit length
/// and parallel to positions (one per point).
struct PointCloud {
  std::vector<Eigen::Vector3d> positions;
  std::vector<Eigen::Vector3d> normals;

  int size() const { return static_cast<int>(positions.size()); }
  bool has_normals() const { return !normals.empty(); }

  void validate() const;
};

/// Diagonal of the axis-aligned bounding box; 0 for degenerate clouds.
double bounding_diameter(const std::vector<Eigen::Vector3d>& positions);

}  // namespace slf
