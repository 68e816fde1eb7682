// SPDX-License-Identifier: Apache-2.0
#include "slf/kdtree.hpp"

#include <algorithm>
#include <queue>

namespace slf {
namespace {

struct Candidate {
  double dist2;
  int index;

  bool operator<(const Candidate& o) const {
    if (dist2 != o.dist2) return dist2 < o.dist2;
    return index < o.index;
  }
};

}  // namespace

KdTree::KdTree(const std::vector<Eigen::Vector3d>& points) : points_(points) {
  if (points_.empty()) return;
  std::vector<int> order(points_.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  nodes_.reserve(points_.size());
  root_ = build(0, static_cast<int>(order.size()), order);
}

int KdTree::build(int begin, int end, std::vector<int>& order) {
  if (begin >= end) return -1;
  // Split on the widest axis for balanced-ish trees.
  Eigen::Vector3d lo = points_[order[begin]], hi = lo;
  for (int i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points_[order[i]]);
    hi = hi.cwiseMax(points_[order[i]]);
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);
  int mid = begin + (end - begin) / 2;
  std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                   [&](int a, int b) {
                     double ca = points_[a][axis], cb = points_[b][axis];
                     if (ca != cb) return ca < cb;
                     return a < b;
                   });
  Node node;
  node.point = order[mid];
  node.axis = axis;
  int self = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  int left = build(begin, mid, order);
  int right = build(mid + 1, end, order);
  nodes_[self].left = left;
  nodes_[self].right = right;
  return self;
}

std::vector<int> KdTree::knn(const Eigen::Vector3d& query, int k, int exclude) const {
  std::vector<int> result;
  if (k <= 0 || root_ < 0) return result;
  std::priority_queue<Candidate> heap;  // max-heap on (dist2, index)

  // Iterative depth-first descent with an explicit stack.
  std::vector<int> stack;
  stack.push_back(root_);
  while (!stack.empty()) {
    int ni = stack.back();
    stack.pop_back();
    if (ni < 0) continue;
    const Node& node = nodes_[static_cast<size_t>(ni)];
    const Eigen::Vector3d& p = points_[static_cast<size_t>(node.point)];
    if (node.point != exclude) {
      Candidate c{(p - query).squaredNorm(), node.point};
      if (static_cast<int>(heap.size()) < k) {
        heap.push(c);
      } else if (c < heap.top()) {
        heap.pop();
        heap.push(c);
      }
    }
    double plane = query[node.axis] - p[node.axis];
    int near = plane < 0.0 ? node.left : node.right;
    int far = plane < 0.0 ? node.right : node.left;
    // Visit the far side unless it provably cannot beat the current worst;
    // equal distances must still cross so index tie-breaks stay exact.
    bool prune = static_cast<int>(heap.size()) == k && plane * plane > heap.top().dist2;
    if (!prune && far >= 0) stack.push_back(far);
    if (near >= 0) stack.push_back(near);
  }

  std::vector<Candidate> sorted;
  sorted.reserve(heap.size());
  while (!heap.empty()) {
    sorted.push_back(heap.top());
    heap.pop();
  }
  std::sort(sorted.begin(), sorted.end());
  result.reserve(sorted.size());
  for (const auto& c : sorted) result.push_back(c.index);
  return result;
}

}  // namespace slf
