// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "slf/camera.hpp"
#include "slf/mapping.hpp"
#include "slf/point_cloud.hpp"
#include "slf/renderer.hpp"

namespace slf {

struct PhongMaterial {
  double diffuse = 0.8;
  double specular = 0.5;
  double shininess = 10.0;
};

struct Light {
  Eigen::Vector3d direction = Eigen::Vector3d(0, 0, 1);  // surface -> light, unit
  Eigen::Vector3d intensity = Eigen::Vector3d(0.7, 0.7, 0.7);
};

/// Analytic stand-in for a rendered capture: a unit sphere or cylinder with
/// a Phong surface, photographed by a ring-of-rings camera rig.
struct SyntheticScene {
  enum class Shape { kSphere, kCylinder };

  Shape shape = Shape::kSphere;
  int point_count = 2000;
  PhongMaterial material;
  std::vector<Light> lights = {Light{}};
  int rig_circles = 11;
  int rig_per_circle = 50;
  double rig_distance = 3.0;   // camera distance from the origin
  double rig_z_span = 0.75;    // circles cover z in [-span, span] * distance
  int image_width = 128;
  int image_height = 128;
  int splat_radius = 1;

  void validate() const;
};

/// Phong radiance in [0, 255]: per light
/// I * (kd * max(0, n.l) + ks * max(0, reflect(l, n).w)^shininess).
Eigen::Vector3d phong_color(const PhongMaterial& material,
                            const std::vector<Light>& lights,
                            const Eigen::Vector3d& normal,
                            const Eigen::Vector3d& view_dir);

/// Camera at `position` looking at `target` with +z up (falls back to +y
/// when degenerate), image plane width x height, focal length in pixels.
CameraModel look_at_camera(const Eigen::Vector3d& position, const Eigen::Vector3d& target,
                           double focal_px, int width, int height);

struct SceneData {
  SyntheticScene config;
  PointCloud cloud;
  std::vector<CameraModel> cameras;  // id = circle * per_circle + slot

  /// Exact directional color of point `index` (the scene's own oracle).
  Eigen::Vector3d oracle_color(int index, const DirectionParam& d) const;
  ColorProvider oracle() const;

  /// Ground-truth capture: the analytic colors splatted by the renderer.
  Image ground_truth(int camera_id) const;
};

/// Samples the surface (Fibonacci lattice on the sphere, uniform grid on the
/// cylinder), attaches exact normals and builds the camera rig.
SceneData synth_scene(const SyntheticScene& config);

}  // namespace slf
