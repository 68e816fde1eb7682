// SPDX-License-Identifier: Apache-2.0
#include "slf/voxel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace slf {

uint64_t morton_encode(uint32_t x, uint32_t y, uint32_t z, int depth) {
  uint64_t code = 0;
  for (int b = 0; b < depth; ++b) {
    code |= static_cast<uint64_t>((x >> b) & 1u) << (3 * b);
    code |= static_cast<uint64_t>((y >> b) & 1u) << (3 * b + 1);
    code |= static_cast<uint64_t>((z >> b) & 1u) << (3 * b + 2);
  }
  return code;
}

std::array<uint32_t, 3> morton_decode(uint64_t code, int depth) {
  std::array<uint32_t, 3> c{0, 0, 0};
  for (int b = 0; b < depth; ++b) {
    c[0] |= static_cast<uint32_t>((code >> (3 * b)) & 1u) << b;
    c[1] |= static_cast<uint32_t>((code >> (3 * b + 1)) & 1u) << b;
    c[2] |= static_cast<uint32_t>((code >> (3 * b + 2)) & 1u) << b;
  }
  return c;
}

std::vector<uint64_t> VoxelCloud::codes() const {
  std::vector<uint64_t> out(coords.size());
  for (size_t i = 0; i < coords.size(); ++i)
    out[i] = morton_encode(coords[i][0], coords[i][1], coords[i][2], depth);
  return out;
}

VoxelCloud voxelize(const PointCloud& cloud, int depth) {
  if (depth < 1 || depth > 21) throw InvalidArgument("voxelize: depth must be in [1, 21]");
  if (cloud.size() == 0) throw InvalidArgument("voxelize: empty cloud");

  Eigen::Vector3d lo = cloud.positions.front(), hi = lo;
  for (const auto& p : cloud.positions) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  double extent = (hi - lo).maxCoeff();
  double grid = static_cast<double>(1u << depth);
  double scale = extent > 0.0 ? grid / extent : 0.0;
  uint32_t cell_max = (1u << depth) - 1u;

  int n = cloud.size();
  std::vector<std::pair<uint64_t, int>> keyed(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Eigen::Vector3d q = (cloud.positions[static_cast<size_t>(i)] - lo) * scale;
    uint32_t cx = std::min(cell_max, static_cast<uint32_t>(std::max(0.0, std::floor(q.x()))));
    uint32_t cy = std::min(cell_max, static_cast<uint32_t>(std::max(0.0, std::floor(q.y()))));
    uint32_t cz = std::min(cell_max, static_cast<uint32_t>(std::max(0.0, std::floor(q.z()))));
    keyed[static_cast<size_t>(i)] = {morton_encode(cx, cy, cz, depth), i};
  }
  std::sort(keyed.begin(), keyed.end());

  VoxelCloud vox;
  vox.depth = depth;
  vox.point_map.resize(static_cast<size_t>(n));
  uint64_t prev = ~uint64_t{0};
  for (const auto& [code, pi] : keyed) {
    if (vox.coords.empty() || code != prev) {
      vox.coords.push_back(morton_decode(code, depth));
      prev = code;
    }
    vox.point_map[static_cast<size_t>(pi)] = static_cast<int>(vox.coords.size()) - 1;
  }
  return vox;
}

Eigen::MatrixXd average_attributes(const VoxelCloud& vox,
                                   const Eigen::MatrixXd& per_point) {
  if (per_point.rows() != static_cast<Eigen::Index>(vox.point_map.size()))
    throw InvalidArgument("average_attributes: row/point_map mismatch");
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(vox.voxel_count(), per_point.cols());
  Eigen::VectorXd count = Eigen::VectorXd::Zero(vox.voxel_count());
  for (Eigen::Index i = 0; i < per_point.rows(); ++i) {
    int v = vox.point_map[static_cast<size_t>(i)];
    sum.row(v) += per_point.row(i);
    count[v] += 1.0;
  }
  for (Eigen::Index v = 0; v < sum.rows(); ++v) sum.row(v) /= count[v];
  return sum;
}

}  // namespace slf
