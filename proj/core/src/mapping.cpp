// SPDX-License-Identifier: Apache-2.0
#include "slf/mapping.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "slf/kdtree.hpp"
#include "slf/parallel.hpp"

namespace slf {

Image Image::filled(int width, int height, const Eigen::Vector3d& rgb) {
  Image img;
  img.width = width;
  img.height = height;
  img.pixels.resize(static_cast<size_t>(width) * height * 3);
  for (size_t i = 0; i < img.pixels.size(); i += 3) {
    for (int c = 0; c < 3; ++c) {
      double v = std::clamp(rgb[c], 0.0, 255.0);
      img.pixels[i + c] = static_cast<uint8_t>(std::lround(v));
    }
  }
  return img;
}

Eigen::Vector3d sample_bilinear(const Image& image, double u, double v) {
  if (!(u >= 0.0 && u <= image.width - 1.0 && v >= 0.0 && v <= image.height - 1.0))
    throw OutOfBounds("sample_bilinear: coordinates outside image");
  int x0 = std::clamp(static_cast<int>(u), 0, std::max(0, image.width - 2));
  int y0 = std::clamp(static_cast<int>(v), 0, std::max(0, image.height - 2));
  int x1 = std::min(x0 + 1, image.width - 1);
  int y1 = std::min(y0 + 1, image.height - 1);
  double fx = u - x0;
  double fy = v - y0;
  const uint8_t* p00 = image.at(x0, y0);
  const uint8_t* p10 = image.at(x1, y0);
  const uint8_t* p01 = image.at(x0, y1);
  const uint8_t* p11 = image.at(x1, y1);
  Eigen::Vector3d out;
  for (int c = 0; c < 3; ++c) {
    double top = p00[c] * (1.0 - fx) + p10[c] * fx;
    double bot = p01[c] * (1.0 - fx) + p11[c] * fx;
    out[c] = top * (1.0 - fy) + bot * fy;
  }
  return out;
}

bool cone_valid(const Eigen::Vector3d& normal, const Eigen::Vector3d& view_dir,
                double delta_deg) {
  if (!(delta_deg >= 0.0 && delta_deg < 90.0))
    throw InvalidArgument("cone_valid: delta must be in [0, 90)");
  if (std::abs(normal.norm() - 1.0) > 1e-6)
    throw InvalidArgument("cone_valid: normal is not unit length");
  if (std::abs(view_dir.norm() - 1.0) > 1e-6)
    throw InvalidArgument("cone_valid: view direction is not unit length");
  return normal.dot(view_dir) >= std::sin(delta_deg * M_PI / 180.0);
}

std::vector<uint8_t> visibility_mask(const PointCloud& cloud, const CameraModel& cam,
                                     double depth_eps) {
  if (depth_eps < 0.0) throw InvalidArgument("visibility_mask: depth_eps must be >= 0");
  int n = cloud.size();
  std::vector<uint8_t> visible(static_cast<size_t>(n), 0);
  std::vector<double> depth(static_cast<size_t>(n), -1.0);
  std::vector<int64_t> cell(static_cast<size_t>(n), -1);
  std::vector<double> zbuf(static_cast<size_t>(cam.width) * cam.height,
                           std::numeric_limits<double>::infinity());
  for (int i = 0; i < n; ++i) {
    Projection pr = project_point(cam, cloud.positions[static_cast<size_t>(i)]);
    if (pr.behind()) continue;
    if (!(pr.u >= 0.0 && pr.u < cam.width && pr.v >= 0.0 && pr.v < cam.height)) continue;
    int px = static_cast<int>(pr.u);
    int py = static_cast<int>(pr.v);
    int64_t c = static_cast<int64_t>(py) * cam.width + px;
    depth[static_cast<size_t>(i)] = pr.depth;
    cell[static_cast<size_t>(i)] = c;
    zbuf[static_cast<size_t>(c)] = std::min(zbuf[static_cast<size_t>(c)], pr.depth);
  }
  for (int i = 0; i < n; ++i) {
    if (cell[static_cast<size_t>(i)] < 0) continue;
    if (depth[static_cast<size_t>(i)] <=
        zbuf[static_cast<size_t>(cell[static_cast<size_t>(i)])] + depth_eps)
      visible[static_cast<size_t>(i)] = 1;
  }
  return visible;
}

Eigen::Vector3d view_direction(const Eigen::Vector3d& p,
                               const Eigen::Vector3d& cam_center) {
  Eigen::Vector3d w = cam_center - p;
  double len = w.norm();
  if (len == 0.0) throw InvalidArgument("view direction undefined: point at camera center");
  return w / len;
}

DirectionParam direction_params(const Eigen::Vector3d& p,
                                const Eigen::Vector3d& cam_center) {
  Eigen::Vector3d w = view_direction(p, cam_center);
  DirectionParam d;
  d.theta = std::atan2(w.y(), w.x());
  d.gamma = std::clamp(w.z(), -1.0, 1.0);
  return d;
}

std::vector<Eigen::Vector3d> estimate_normals(
    const std::vector<Eigen::Vector3d>& positions, int k) {
  if (k < 3) throw InvalidArgument("estimate_normals: k must be >= 3");
  int n = static_cast<int>(positions.size());
  if (n < k) throw InvalidArgument("estimate_normals: fewer points than k");
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : positions) centroid += p;
  centroid /= n;

  KdTree tree(positions);
  std::vector<Eigen::Vector3d> normals(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<int> nb = tree.knn(positions[static_cast<size_t>(i)], k);
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (int j : nb) mean += positions[static_cast<size_t>(j)];
    mean /= static_cast<double>(nb.size());
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (int j : nb) {
      Eigen::Vector3d d = positions[static_cast<size_t>(j)] - mean;
      cov += d * d.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
    Eigen::Vector3d normal = es.eigenvectors().col(0);
    double len = normal.norm();
    normal = (len > 0.0) ? Eigen::Vector3d(normal / len) : Eigen::Vector3d(0, 0, 1);
    if (normal.dot(positions[static_cast<size_t>(i)] - centroid) < 0.0) normal = -normal;
    normals[static_cast<size_t>(i)] = normal;
  }
  return normals;
}

size_t ObservationSet::total() const {
  size_t t = 0;
  for (const auto& v : per_point) t += v.size();
  return t;
}

ObservationSet build_observations(const PointCloud& cloud,
                                  const std::vector<CameraModel>& cameras,
                                  const std::vector<Image>& images,
                                  double delta_deg, double depth_eps, int threads) {
  if (cameras.size() != images.size())
    throw InvalidArgument("build_observations: camera/image count mismatch");
  if (!cloud.has_normals())
    throw InvalidArgument("build_observations: cloud has no normals");
  cloud.validate();

  int n_cams = static_cast<int>(cameras.size());
  int n_pts = cloud.size();
  // Per-camera lists keep writes disjoint; the merge below runs in camera-id
  // order, so the result is independent of the execution schedule.
  std::vector<std::vector<std::pair<int, Observation>>> by_cam(
      static_cast<size_t>(n_cams));
  parallel_for(0, n_cams, threads, [&](int ci) {
    const CameraModel& cam = cameras[static_cast<size_t>(ci)];
    const Image& img = images[static_cast<size_t>(ci)];
    std::vector<uint8_t> visible = visibility_mask(cloud, cam, depth_eps);
    Eigen::Vector3d center = cam.center();
    auto& out = by_cam[static_cast<size_t>(ci)];
    for (int pi = 0; pi < n_pts; ++pi) {
      if (!visible[static_cast<size_t>(pi)]) continue;
      const Eigen::Vector3d& p = cloud.positions[static_cast<size_t>(pi)];
      Projection pr = project_point(cam, p);
      if (!(pr.u >= 0.0 && pr.u <= img.width - 1.0 && pr.v >= 0.0 &&
            pr.v <= img.height - 1.0))
        continue;  // visible but not bilinear-sampleable at the edge strip
      Eigen::Vector3d w = view_direction(p, center);
      if (!cone_valid(cloud.normals[static_cast<size_t>(pi)], w, delta_deg)) continue;
      Observation ob;
      ob.direction = direction_params(p, center);
      ob.color = sample_bilinear(img, pr.u, pr.v);
      ob.camera_id = ci;
      out.emplace_back(pi, ob);
    }
  });

  ObservationSet set;
  set.per_point.resize(static_cast<size_t>(n_pts));
  for (int ci = 0; ci < n_cams; ++ci)
    for (const auto& [pi, ob] : by_cam[static_cast<size_t>(ci)])
      set.per_point[static_cast<size_t>(pi)].push_back(ob);
  return set;
}

}  // namespace slf
