// SPDX-License-Identifier: Apache-2.0
#include <Eigen/LU>

#include "slf/camera.hpp"

namespace slf {

void CameraModel::validate() const {
  Eigen::Matrix3d rtr = rotation.transpose() * rotation;
  if ((rtr - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-9)
    throw InvalidArgument("camera rotation is not orthonormal");
  if (rotation.determinant() < 0.0)
    throw InvalidArgument("camera rotation must be proper (det +1)");
  if (width < 1 || height < 1)
    throw InvalidArgument("camera image size must be at least 1x1");
  if (intrinsics(0, 0) <= 0.0 || intrinsics(1, 1) <= 0.0)
    throw InvalidArgument("camera focal lengths must be positive");
}

Projection project_point(const CameraModel& cam, const Eigen::Vector3d& p) {
  Eigen::Vector3d q = cam.rotation * p + cam.translation;
  Projection out;
  out.depth = q.z();
  if (out.depth <= 0.0) return out;
  Eigen::Vector3d h = cam.intrinsics * q;
  out.u = h.x() / h.z();
  out.v = h.y() / h.z();
  return out;
}

}  // namespace slf
