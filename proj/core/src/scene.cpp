// SPDX-License-Identifier: Apache-2.0
#include <Eigen/Geometry>

#include "slf/scene.hpp"

#include <cmath>

namespace slf {

void SyntheticScene::validate() const {
  if (point_count < 1) throw InvalidArgument("scene: point_count must be >= 1");
  if (material.diffuse < 0.0 || material.specular < 0.0)
    throw InvalidArgument("scene: material terms must be >= 0");
  if (material.shininess <= 0.0) throw InvalidArgument("scene: shininess must be > 0");
  if (lights.empty()) throw InvalidArgument("scene: at least one light required");
  if (rig_circles < 1 || rig_per_circle < 1)
    throw InvalidArgument("scene: rig must have at least one camera");
  if (!(rig_distance > 1.0)) throw InvalidArgument("scene: rig distance must exceed 1");
  if (!(rig_z_span > 0.0 && rig_z_span < 1.0))
    throw InvalidArgument("scene: rig z span must be in (0, 1)");
  if (image_width < 2 || image_height < 2)
    throw InvalidArgument("scene: images must be at least 2x2");
  if (splat_radius < 0) throw InvalidArgument("scene: splat radius must be >= 0");
}

Eigen::Vector3d phong_color(const PhongMaterial& material,
                            const std::vector<Light>& lights,
                            const Eigen::Vector3d& normal,
                            const Eigen::Vector3d& view_dir) {
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (const Light& light : lights) {
    Eigen::Vector3d l = light.direction.normalized();
    double diffuse = material.diffuse * std::max(0.0, normal.dot(l));
    Eigen::Vector3d refl = 2.0 * normal.dot(l) * normal - l;
    double spec =
        material.specular *
        std::pow(std::max(0.0, refl.dot(view_dir)), material.shininess);
    c += light.intensity * (diffuse + spec);
  }
  return (255.0 * c).cwiseMax(0.0).cwiseMin(255.0);
}

CameraModel look_at_camera(const Eigen::Vector3d& position, const Eigen::Vector3d& target,
                           double focal_px, int width, int height) {
  Eigen::Vector3d fwd = target - position;
  double len = fwd.norm();
  if (len == 0.0) throw InvalidArgument("look_at_camera: position equals target");
  fwd /= len;
  Eigen::Vector3d up(0, 0, 1);
  if (std::abs(fwd.dot(up)) > 1.0 - 1e-9) up = Eigen::Vector3d(0, 1, 0);
  Eigen::Vector3d right = fwd.cross(up).normalized();
  Eigen::Vector3d down = fwd.cross(right);  // image v axis
  CameraModel cam;
  cam.rotation.row(0) = right;
  cam.rotation.row(1) = down;
  cam.rotation.row(2) = fwd;
  cam.translation = -cam.rotation * position;
  cam.intrinsics = Eigen::Matrix3d::Identity();
  cam.intrinsics(0, 0) = focal_px;
  cam.intrinsics(1, 1) = focal_px;
  cam.intrinsics(0, 2) = 0.5 * width;
  cam.intrinsics(1, 2) = 0.5 * height;
  cam.width = width;
  cam.height = height;
  cam.validate();
  return cam;
}

Eigen::Vector3d SceneData::oracle_color(int index, const DirectionParam& d) const {
  double cos_el = std::sqrt(std::max(0.0, 1.0 - d.gamma * d.gamma));
  Eigen::Vector3d w(cos_el * std::cos(d.theta), cos_el * std::sin(d.theta), d.gamma);
  return phong_color(config.material, config.lights,
                     cloud.normals[static_cast<size_t>(index)], w);
}

ColorProvider SceneData::oracle() const {
  return [this](int index, const DirectionParam& d) { return oracle_color(index, d); };
}

Image SceneData::ground_truth(int camera_id) const {
  if (camera_id < 0 || camera_id >= static_cast<int>(cameras.size()))
    throw InvalidArgument("ground_truth: camera id out of range");
  RenderConfig cfg;
  cfg.width = config.image_width;
  cfg.height = config.image_height;
  cfg.splat_radius = config.splat_radius;
  return render(cloud.positions, oracle(), cameras[static_cast<size_t>(camera_id)], cfg);
}

SceneData synth_scene(const SyntheticScene& config) {
  config.validate();
  SceneData data;
  data.config = config;

  int n = config.point_count;
  data.cloud.positions.reserve(static_cast<size_t>(n));
  data.cloud.normals.reserve(static_cast<size_t>(n));
  if (config.shape == SyntheticScene::Shape::kSphere) {
    // Fibonacci lattice: near-uniform area per sample.
    double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
      double z = 1.0 - 2.0 * (i + 0.5) / n;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double phi = golden * i;
      Eigen::Vector3d p(r * std::cos(phi), r * std::sin(phi), z);
      data.cloud.positions.push_back(p);
      data.cloud.normals.push_back(p);
    }
  } else {
    // Lateral surface of a unit-radius cylinder, z in [-1, 1].
    int n_phi = std::max(3, static_cast<int>(std::lround(std::sqrt(n * M_PI))));
    int n_z = std::max(1, (n + n_phi - 1) / n_phi);
    for (int iz = 0; iz < n_z && static_cast<int>(data.cloud.positions.size()) < n; ++iz) {
      double z = (n_z == 1) ? 0.0 : -1.0 + 2.0 * iz / (n_z - 1.0);
      for (int ip = 0; ip < n_phi && static_cast<int>(data.cloud.positions.size()) < n; ++ip) {
        double phi = 2.0 * M_PI * ip / n_phi;
        Eigen::Vector3d normal(std::cos(phi), std::sin(phi), 0.0);
        data.cloud.positions.push_back(Eigen::Vector3d(normal.x(), normal.y(), z));
        data.cloud.normals.push_back(normal);
      }
    }
  }

  double focal = 1.2 * std::min(config.image_width, config.image_height);
  double zmax = config.rig_z_span * config.rig_distance;
  for (int c = 0; c < config.rig_circles; ++c) {
    double z = (config.rig_circles == 1)
                   ? 0.0
                   : -zmax + 2.0 * zmax * c / (config.rig_circles - 1.0);
    double ring = std::sqrt(std::max(1e-12, config.rig_distance * config.rig_distance - z * z));
    for (int s = 0; s < config.rig_per_circle; ++s) {
      double phi = 2.0 * M_PI * s / config.rig_per_circle;
      Eigen::Vector3d pos(ring * std::cos(phi), ring * std::sin(phi), z);
      data.cameras.push_back(look_at_camera(pos, Eigen::Vector3d::Zero(), focal,
                                            config.image_width, config.image_height));
    }
  }
  return data;
}

}  // namespace slf
