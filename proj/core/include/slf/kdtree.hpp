// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <vector>

namespace slf {

/// Static 3D kd-tree for exact k-nearest-neighbor queries. Ties on distance
/// are broken toward the lower point index, so results are deterministic.
class KdTree {
 public:
  KdTree() = default;
  explicit KdTree(const std::vector<Eigen::Vector3d>& points);

  /// Indices of the k nearest points to `query`, sorted by (distance, index)
  /// ascending. `exclude` (a point index, or -1) is never returned. Returns
  /// fewer than k indices when the tree is too small.
  std::vector<int> knn(const Eigen::Vector3d& query, int k, int exclude = -1) const;

  int size() const { return static_cast<int>(points_.size()); }

 private:
  struct Node {
    int point = -1;
    int axis = 0;
    int left = -1;
    int right = -1;
  };

  int build(int begin, int end, std::vector<int>& order);

  std::vector<Eigen::Vector3d> points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace slf
