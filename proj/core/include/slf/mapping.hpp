// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "slf/basis.hpp"
#include "slf/camera.hpp"
#include "slf/errors.hpp"
#include "slf/point_cloud.hpp"

namespace slf {

/// 8-bit RGB raster, row-major, 3 bytes per pixel.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;

  static Image filled(int width, int height, const Eigen::Vector3d& rgb);
  uint8_t* at(int x, int y) { return pixels.data() + 3 * (static_cast<size_t>(y) * width + x); }
  const uint8_t* at(int x, int y) const {
    return pixels.data() + 3 * (static_cast<size_t>(y) * width + x);
  }
};

/// Bilinear blend of the four enclosing pixels. Requires
/// 0 <= u <= width-1 and 0 <= v <= height-1; throws OutOfBounds otherwise.
Eigen::Vector3d sample_bilinear(const Image& image, double u, double v);

/// True iff the angle between normal and view direction is at most
/// 90 - delta degrees. Both vectors must be unit length (1e-6).
bool cone_valid(const Eigen::Vector3d& normal, const Eigen::Vector3d& view_dir,
                double delta_deg);

/// Per-point visibility under a z-buffer at the camera's own resolution: a
/// point is visible iff it projects inside the image, has positive depth,
/// and is within depth_eps of the minimum depth in its pixel cell.
std::vector<uint8_t> visibility_mask(const PointCloud& cloud, const CameraModel& cam,
                                     double depth_eps);

/// Direction parameters of the unit vector from p toward cam_center:
/// theta = atan2(w_y, w_x), gamma = w_z. At the poles theta is 0 by the
/// atan2(0, 0) convention.
DirectionParam direction_params(const Eigen::Vector3d& p,
                                const Eigen::Vector3d& cam_center);

/// Unit direction from p toward cam_center (the observation ray).
Eigen::Vector3d view_direction(const Eigen::Vector3d& p,
                               const Eigen::Vector3d& cam_center);

/// Per-point normals from the smallest covariance eigenvector of the k
/// nearest points (self included), oriented away from the cloud centroid.
std::vector<Eigen::Vector3d> estimate_normals(
    const std::vector<Eigen::Vector3d>& positions, int k);

struct Observation {
  DirectionParam direction;
  Eigen::Vector3d color;  // [0, 255] per channel
  int camera_id = 0;
};

/// Valid view-map samples per point, each list sorted by camera_id.
struct ObservationSet {
  std::vector<std::vector<Observation>> per_point;

  int point_count() const { return static_cast<int>(per_point.size()); }
  size_t total() const;
};

/// Collects one observation per (point, camera) pair that is projected
/// in-bounds, depth-visible and inside the validity cone. Colors come from
/// bilinear sampling, directions point from the surface to the camera.
ObservationSet build_observations(const PointCloud& cloud,
                                  const std::vector<CameraModel>& cameras,
                                  const std::vector<Image>& images,
                                  double delta_deg, double depth_eps,
                                  int threads = 0);

}  // namespace slf
