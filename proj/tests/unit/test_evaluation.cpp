// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "slf/evaluation.hpp"

using namespace slf;

namespace {

// One front-facing point seen by one camera over a flat image: every sample
// error is exactly (recon - fill).
struct FlatSetup {
  PointCloud cloud;
  std::vector<CameraModel> cams;
  SlfCoefficients coeffs;
  BasisSpec spec{2, 2, 1};

  explicit FlatSetup(double recon_value) {
    cloud.positions = {{0, 0, 0}, {0.2, 0.1, 0.0}};
    cloud.normals = {{0, 0, -1}, {0, 0, -1}};
    cams.push_back(look_at_camera({0, 0, -4}, {0, 0, 0}, 32.0, 32, 32));
    coeffs.spec = spec;
    coeffs.channels.assign(3, Eigen::MatrixXd::Zero(2, spec.count()));
    for (auto& ch : coeffs.channels) ch.col(0).setConstant(recon_value);
  }
};

}  // namespace

TEST_CASE("phong: Lambertian limit, clamp below horizon, specular peak") {
  PhongMaterial lambert{0.8, 0.0, 10.0};
  Eigen::Vector3d n(0, 0, 1);
  std::vector<Light> lights = {Light{n, Eigen::Vector3d(0.9, 0.9, 0.9)}};
  // Light along the normal: kd * I everywhere, independent of view.
  for (double gz : {0.2, 0.6, 1.0}) {
    Eigen::Vector3d w = Eigen::Vector3d(0.3, -0.1, gz).normalized();
    Eigen::Vector3d c = phong_color(lambert, lights, n, w);
    CHECK(c.x() == doctest::Approx(255.0 * 0.8 * 0.9).epsilon(1e-12));
  }
  // Light behind the surface: zero diffuse.
  std::vector<Light> behind = {Light{-n, Eigen::Vector3d(0.9, 0.9, 0.9)}};
  CHECK(phong_color(lambert, behind, n, n).x() == doctest::Approx(0.0));

  // Specular response peaks where the view equals the mirror direction.
  PhongMaterial shiny{0.0, 0.5, 12.0};
  Eigen::Vector3d l = Eigen::Vector3d(0.3, 0.1, 0.95).normalized();
  std::vector<Light> one = {Light{l, Eigen::Vector3d(1, 1, 1)}};
  Eigen::Vector3d mirror = (2.0 * n.dot(l) * n - l).normalized();
  double best = phong_color(shiny, one, n, mirror).x();
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    Eigen::Vector3d w = Eigen::Vector3d(u(rng), u(rng), u(rng)).normalized();
    CHECK(phong_color(shiny, one, n, w).x() <= best + 1e-9);
  }
}

TEST_CASE("split_cameras: Table II counts for the 11x50 rig") {
  CameraSplit dense = split_cameras(11, 50, SplitMode::kDense);
  CHECK(dense.input_ids.size() == 125);
  CHECK(dense.eval_ids.size() == 425);
  CameraSplit mid = split_cameras(11, 50, SplitMode::kIntermediate);
  CHECK(mid.input_ids.size() == 39);
  CHECK(mid.eval_ids.size() == 511);
  CameraSplit sparse = split_cameras(11, 50, SplitMode::kSparse);
  CHECK(sparse.input_ids.size() == 14);
  CHECK(sparse.eval_ids.size() == 536);

  // True partition.
  std::set<int> all;
  for (int id : dense.input_ids) all.insert(id);
  for (int id : dense.eval_ids) all.insert(id);
  CHECK(all.size() == 550);
  CHECK(*all.begin() == 0);
  CHECK(*all.rbegin() == 549);

  // Deterministic.
  CameraSplit again = split_cameras(11, 50, SplitMode::kDense);
  CHECK(again.input_ids == dense.input_ids);

  CHECK_THROWS_AS(split_cameras(1, 4, SplitMode::kDense), InvalidArgument);
}

TEST_CASE("slf_psnr: exact reconstruction hits the 100 dB cap") {
  FlatSetup setup(140.0);
  std::vector<Image> images = {Image::filled(32, 32, {140, 140, 140})};
  double psnr = slf_psnr(setup.coeffs, setup.cloud, setup.cams, images, 10.0, 0.0);
  CHECK(psnr == doctest::Approx(100.0));
}

TEST_CASE("slf_psnr: uniform unit error gives 20 log10(255)") {
  FlatSetup setup(140.0);
  std::vector<Image> images = {Image::filled(32, 32, {141, 141, 141})};
  double psnr = slf_psnr(setup.coeffs, setup.cloud, setup.cams, images, 10.0, 0.0);
  CHECK(psnr == doctest::Approx(20.0 * std::log10(255.0)).epsilon(1e-9));
}

TEST_CASE("slf_psnr: doubling the error drops exactly 20 log10 2") {
  FlatSetup setup(140.0);
  std::vector<Image> e1 = {Image::filled(32, 32, {142, 142, 142})};
  std::vector<Image> e2 = {Image::filled(32, 32, {144, 144, 144})};
  double p1 = slf_psnr(setup.coeffs, setup.cloud, setup.cams, e1, 10.0, 0.0);
  double p2 = slf_psnr(setup.coeffs, setup.cloud, setup.cams, e2, 10.0, 0.0);
  CHECK(p1 - p2 == doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-12));
}

TEST_CASE("slf_psnr: no valid samples is an error; wide cones see more") {
  FlatSetup setup(100.0);
  std::vector<Image> images = {Image::filled(32, 32, {100, 100, 100})};
  // 89.9 degrees: cone admits almost nothing (normals face the camera
  // straight on, so it still passes); flip normals to kill all samples.
  PointCloud away = setup.cloud;
  away.normals = {{0, 0, 1}, {0, 0, 1}};
  CHECK_THROWS_AS(slf_psnr(setup.coeffs, away, setup.cams, images, 10.0, 0.0),
                  InvalidArgument);

  // Consistency: building at delta' equals building wide then filtering.
  ObservationSet wide =
      build_observations(setup.cloud, setup.cams, images, 0.0, 0.0);
  double filtered = psnr_from_observations(setup.coeffs, setup.cloud, wide, 45.0);
  double direct = slf_psnr(setup.coeffs, setup.cloud, setup.cams, images, 45.0, 0.0);
  CHECK(filtered == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("spread_to_points: voxel rows land on their source points") {
  VoxelCloud vox;
  vox.depth = 2;
  vox.coords = {{0, 0, 0}, {1, 0, 0}};
  vox.point_map = {1, 0, 1};
  SlfCoefficients per_voxel;
  per_voxel.spec = BasisSpec{2, 1, 0};
  per_voxel.channels.assign(1, Eigen::MatrixXd(2, 2));
  per_voxel.channels[0] << 1, 2, 3, 4;
  SlfCoefficients out = spread_to_points(per_voxel, vox);
  CHECK(out.channels[0].rows() == 3);
  CHECK(out.channels[0](0, 0) == 3);
  CHECK(out.channels[0](1, 0) == 1);
  CHECK(out.channels[0](2, 1) == 4);
}

TEST_CASE("spec_for_count: scale pairs") {
  BasisSpec s1 = spec_for_count(2, 1);
  CHECK(s1.scale_theta == 0);
  CHECK(s1.scale_gamma == 0);
  BasisSpec s32 = spec_for_count(2, 32);
  CHECK(s32.scale_theta == 3);
  CHECK(s32.scale_gamma == 2);
  BasisSpec s128 = spec_for_count(2, 128);
  CHECK(s128.scale_theta == 4);
  CHECK(s128.scale_gamma == 3);
  CHECK_THROWS_AS(spec_for_count(2, 48), InvalidArgument);
}

TEST_CASE("rd_sweep: single row, decreasing rate in Q, stable CSV header") {
  SweepSettings settings;
  settings.scene.point_count = 300;
  settings.scene.rig_circles = 3;
  settings.scene.rig_per_circle = 8;
  settings.scene.image_width = settings.scene.image_height = 48;
  settings.scene.lights = {Light{Eigen::Vector3d(0.5, 0.2, 0.8).normalized(),
                                 Eigen::Vector3d(0.6, 0.6, 0.6)}};
  settings.eval.split = SplitMode::kDense;
  settings.spec = BasisSpec{2, 2, 1};  // N = 8
  settings.fit.max_iters = 2;
  settings.depth = 6;

  std::vector<SweepRow> one = rd_sweep(settings, SweepAxis::kQStep, {8.0});
  REQUIRE(one.size() == 1);
  CHECK(one[0].setting == 8.0);
  CHECK(one[0].total_bits > 0);

  std::vector<SweepRow> rows = rd_sweep(settings, SweepAxis::kQStep, {8.0, 16.0, 32.0});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].total_bits > rows[1].total_bits);
  CHECK(rows[1].total_bits > rows[2].total_bits);

  // Bit-identical reproduction.
  std::vector<SweepRow> rows2 = rd_sweep(settings, SweepAxis::kQStep, {8.0, 16.0, 32.0});
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].total_bits == rows2[i].total_bits);
    for (size_t d = 0; d < 4; ++d) CHECK(rows[i].psnr[d] == rows2[i].psnr[d]);
  }

  std::string csv = sweep_csv(rows);
  CHECK(csv.rfind("setting,total_bits,psnr_d0,psnr_d10,psnr_d20,psnr_d30\n", 0) == 0);
}

TEST_CASE("rd_sweep: DC suffices for a diffuse scene across the N sweep") {
  SweepSettings settings;
  settings.scene.point_count = 400;
  settings.scene.material.specular = 0.0;
  settings.scene.rig_circles = 5;
  settings.scene.rig_per_circle = 10;
  settings.scene.image_width = settings.scene.image_height = 48;
  settings.scene.lights = {Light{Eigen::Vector3d(0.6, 0.1, 0.7).normalized(),
                                 Eigen::Vector3d(0.7, 0.7, 0.7)}};
  settings.eval.split = SplitMode::kDense;
  settings.spec = BasisSpec{2, 4, 3};
  settings.fit.max_iters = 2;
  settings.depth = 6;

  std::vector<SweepRow> rows = rd_sweep(settings, SweepAxis::kBasisCount, {1, 32, 128});
  REQUIRE(rows.size() == 3);
  // One coefficient represents a diffuse surface: the DC row loses nothing
  // against the wider bases at matched Q, at any evaluation cone.
  for (size_t d = 0; d < 4; ++d) {
    CHECK(rows[0].psnr[d] >= rows[1].psnr[d] - 0.5);
    CHECK(rows[0].psnr[d] >= rows[2].psnr[d] - 0.5);
  }
  CHECK(rows[0].total_bits < rows[2].total_bits);
}
