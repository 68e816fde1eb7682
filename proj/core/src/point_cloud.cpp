// SPDX-License-Identifier: Apache-2.0
#include "slf/point_cloud.hpp"

#include <cmath>

namespace slf {

void PointCloud::validate() const {
  if (!normals.empty() && normals.size() != positions.size())
    throw InvalidArgument("point cloud normals/positions length mismatch");
  for (const auto& n : normals) {
    if (std::abs(n.norm() - 1.0) > 1e-6)
      throw InvalidArgument("point cloud normal is not unit length");
  }
}

double bounding_diameter(const std::vector<Eigen::Vector3d>& positions) {
  if (positions.empty()) return 0.0;
  Eigen::Vector3d lo = positions.front(), hi = positions.front();
  for (const auto& p : positions) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

}  // namespace slf
