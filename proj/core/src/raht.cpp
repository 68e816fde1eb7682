// SPDX-License-Identifier: Apache-2.0
#include "slf/raht.hpp"

#include <cmath>

namespace slf {

RahtPlan RahtPlan::build(const VoxelCloud& vox) {
  RahtPlan plan;
  plan.voxel_count = vox.voxel_count();
  if (plan.voxel_count == 0) throw InvalidArgument("raht: empty voxel cloud");

  struct Active {
    uint64_t code;
    double weight;
    int node;
  };
  std::vector<uint64_t> codes = vox.codes();
  std::vector<Active> active(codes.size());
  for (size_t i = 0; i < codes.size(); ++i)
    active[i] = {codes[i], 1.0, static_cast<int>(i)};

  int next_node = plan.voxel_count;
  std::vector<Active> merged;
  for (int bit = 0; bit < 3 * vox.depth; ++bit) {
    merged.clear();
    merged.reserve(active.size());
    for (size_t i = 0; i < active.size();) {
      if (i + 1 < active.size() &&
          (active[i].code >> (bit + 1)) == (active[i + 1].code >> (bit + 1))) {
        RahtStep step;
        step.child_a = active[i].node;
        step.child_b = active[i + 1].node;
        step.parent = next_node++;
        step.sqrt_wa = std::sqrt(active[i].weight);
        step.sqrt_wb = std::sqrt(active[i + 1].weight);
        double w = active[i].weight + active[i + 1].weight;
        step.sqrt_sum = std::sqrt(w);
        plan.steps.push_back(step);
        merged.push_back({active[i].code, w, step.parent});
        i += 2;
      } else {
        merged.push_back(active[i]);
        ++i;
      }
    }
    active.swap(merged);
    if (active.size() == 1) break;
  }
  plan.root = active.front().node;
  return plan;
}

std::vector<double> raht_forward(const RahtPlan& plan, std::span<const double> plane) {
  if (static_cast<int>(plane.size()) != plan.voxel_count)
    throw InvalidArgument("raht_forward: plane length mismatch");
  std::vector<double> values(static_cast<size_t>(plan.voxel_count + plan.steps.size()));
  std::copy(plane.begin(), plane.end(), values.begin());
  std::vector<double> coeffs(plane.size());
  size_t ac = 1;
  for (const RahtStep& s : plan.steps) {
    double a = values[static_cast<size_t>(s.child_a)];
    double b = values[static_cast<size_t>(s.child_b)];
    values[static_cast<size_t>(s.parent)] = (s.sqrt_wa * a + s.sqrt_wb * b) / s.sqrt_sum;
    coeffs[ac++] = (-s.sqrt_wb * a + s.sqrt_wa * b) / s.sqrt_sum;
  }
  coeffs[0] = values[static_cast<size_t>(plan.root)];
  return coeffs;
}

std::vector<double> raht_inverse(const RahtPlan& plan, std::span<const double> coeffs) {
  if (static_cast<int>(coeffs.size()) != plan.voxel_count)
    throw InvalidArgument("raht_inverse: coefficient length mismatch");
  std::vector<double> values(static_cast<size_t>(plan.voxel_count + plan.steps.size()));
  values[static_cast<size_t>(plan.root)] = coeffs[0];
  for (size_t si = plan.steps.size(); si-- > 0;) {
    const RahtStep& s = plan.steps[si];
    double dc = values[static_cast<size_t>(s.parent)];
    double acv = coeffs[1 + si];
    values[static_cast<size_t>(s.child_a)] = (s.sqrt_wa * dc - s.sqrt_wb * acv) / s.sqrt_sum;
    values[static_cast<size_t>(s.child_b)] = (s.sqrt_wb * dc + s.sqrt_wa * acv) / s.sqrt_sum;
  }
  return std::vector<double>(values.begin(), values.begin() + plan.voxel_count);
}

std::vector<double> raht_forward(const VoxelCloud& vox, std::span<const double> plane) {
  return raht_forward(RahtPlan::build(vox), plane);
}

std::vector<double> raht_inverse(const VoxelCloud& vox, std::span<const double> coeffs) {
  return raht_inverse(RahtPlan::build(vox), coeffs);
}

}  // namespace slf
