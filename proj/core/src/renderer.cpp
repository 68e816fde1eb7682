// SPDX-License-Identifier: Apache-2.0
#include "slf/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace slf {

void RenderConfig::validate() const {
  if (width < 1 || height < 1) throw InvalidArgument("render: image size must be >= 1");
  if (splat_radius < 0) throw InvalidArgument("render: splat radius must be >= 0");
}

Eigen::Vector3d reconstruct_radiance(const Eigen::MatrixXd& alpha,
                                     const BasisSpec& spec, const DirectionParam& d) {
  if (alpha.rows() != spec.count())
    throw InvalidArgument("reconstruct: coefficient length mismatch");
  BasisEvaluator eval(spec);
  Eigen::VectorXd g = eval.row(d);
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  for (int ch = 0; ch < alpha.cols() && ch < 3; ++ch) out[ch] = g.dot(alpha.col(ch));
  return out;
}

Eigen::Vector3d reconstruct_color(const Eigen::MatrixXd& alpha, const BasisSpec& spec,
                                  const DirectionParam& d) {
  Eigen::Vector3d v = reconstruct_radiance(alpha, spec, d);
  return v.cwiseMax(0.0).cwiseMin(255.0);
}

Image render(const std::vector<Eigen::Vector3d>& positions,
             const ColorProvider& color, const CameraModel& cam,
             const RenderConfig& cfg) {
  cfg.validate();
  Image img = Image::filled(cfg.width, cfg.height, cfg.background);
  size_t n_px = static_cast<size_t>(cfg.width) * cfg.height;
  std::vector<double> zbuf(n_px, std::numeric_limits<double>::infinity());
  std::vector<int> owner(n_px, -1);
  std::vector<Eigen::Vector3d> shade(n_px);

  Eigen::Vector3d center = cam.center();
  int r = cfg.splat_radius;
  for (int pi = 0; pi < static_cast<int>(positions.size()); ++pi) {
    const Eigen::Vector3d& p = positions[static_cast<size_t>(pi)];
    Projection pr = project_point(cam, p);
    if (pr.behind()) continue;
    if (!(pr.u >= 0.0 && pr.u < cfg.width && pr.v >= 0.0 && pr.v < cfg.height)) continue;
    int cx = static_cast<int>(pr.u);
    int cy = static_cast<int>(pr.v);
    Eigen::Vector3d rgb = color(pi, direction_params(p, center));
    for (int y = std::max(0, cy - r); y <= std::min(cfg.height - 1, cy + r); ++y) {
      for (int x = std::max(0, cx - r); x <= std::min(cfg.width - 1, cx + r); ++x) {
        size_t idx = static_cast<size_t>(y) * cfg.width + x;
        if (pr.depth < zbuf[idx] || (pr.depth == zbuf[idx] && pi < owner[idx])) {
          zbuf[idx] = pr.depth;
          owner[idx] = pi;
          shade[idx] = rgb;
        }
      }
    }
  }
  for (int y = 0; y < cfg.height; ++y) {
    for (int x = 0; x < cfg.width; ++x) {
      size_t idx = static_cast<size_t>(y) * cfg.width + x;
      if (owner[idx] < 0) continue;
      uint8_t* px = img.at(x, y);
      for (int c = 0; c < 3; ++c)
        px[c] = static_cast<uint8_t>(std::lround(std::clamp(shade[idx][c], 0.0, 255.0)));
    }
  }
  return img;
}

Image render_slf(const PointCloud& cloud, const SlfCoefficients& coeffs,
                 const CameraModel& cam, const RenderConfig& cfg) {
  coeffs.validate();
  if (coeffs.point_count() != cloud.size())
    throw InvalidArgument("render_slf: coefficients missing for some points");
  BasisEvaluator eval(coeffs.spec);
  int n_ch = std::min(coeffs.channel_count(), 3);
  auto provider = [&](int pi, const DirectionParam& d) {
    Eigen::VectorXd g = eval.row(d);
    Eigen::Vector3d out = Eigen::Vector3d::Zero();
    for (int ch = 0; ch < n_ch; ++ch)
      out[ch] = g.dot(coeffs.channels[static_cast<size_t>(ch)].row(pi));
    return out.cwiseMax(0.0).cwiseMin(255.0).eval();
  };
  return render(cloud.positions, provider, cam, cfg);
}

}  // namespace slf
