// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <functional>

#include "slf/basis.hpp"
#include "slf/camera.hpp"
#include "slf/fitting.hpp"
#include "slf/mapping.hpp"
#include "slf/point_cloud.hpp"

namespace slf {

struct RenderConfig {
  int width = 256;
  int height = 256;
  int splat_radius = 1;  // square splats of (2r+1)^2 pixels
  Eigen::Vector3d background = Eigen::Vector3d::Zero();

  void validate() const;
};

/// View map value at one direction, unclamped: per channel sum_i alpha_i g_i.
/// `alpha` is basis_count x channels.
Eigen::Vector3d reconstruct_radiance(const Eigen::MatrixXd& alpha,
                                     const BasisSpec& spec, const DirectionParam& d);

/// reconstruct_radiance clamped to displayable [0, 255].
Eigen::Vector3d reconstruct_color(const Eigen::MatrixXd& alpha, const BasisSpec& spec,
                                  const DirectionParam& d);

/// Color of point `index` seen from direction d (toward the viewer).
using ColorProvider =
    std::function<Eigen::Vector3d(int index, const DirectionParam& d)>;

/// Point-splat rasterizer: each in-view point paints a square around its
/// projection under a per-pixel z-buffer; depth ties break to the lower
/// point index so output is schedule independent.
Image render(const std::vector<Eigen::Vector3d>& positions,
             const ColorProvider& color, const CameraModel& cam,
             const RenderConfig& cfg);

/// Renders reconstructed view maps from fitted or decoded coefficients.
Image render_slf(const PointCloud& cloud, const SlfCoefficients& coeffs,
                 const CameraModel& cam, const RenderConfig& cfg);

}  // namespace slf
