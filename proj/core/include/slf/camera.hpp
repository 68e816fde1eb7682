// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include "slf/errors.hpp"

namespace slf {

/// Pinhole camera: p' = K [R|t] p, image plane width x height pixels.
struct CameraModel {
  Eigen::Matrix3d intrinsics = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  int width = 1;
  int height = 1;

  /// Center of projection in world coordinates.
  Eigen::Vector3d center() const { return -rotation.transpose() * translation; }

  /// Checks R orthonormality (1e-9), det +1, positive focal lengths and a
  /// non-degenerate image size. Throws InvalidArgument.
  void validate() const;
};

struct Projection {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;

  bool behind() const { return depth <= 0.0; }
};

/// Projects a world point. depth is the camera-frame z; depth <= 0 means the
/// point is behind the camera (reported, not an error) and (u, v) are 0.
Projection project_point(const CameraModel& cam, const Eigen::Vector3d& p);

}  // namespace slf
