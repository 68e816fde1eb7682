// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "slf/io.hpp"
#include "slf/scene.hpp"

using namespace slf;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("slf_io_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

PointCloud sample_cloud(int n, bool normals) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  PointCloud cloud;
  for (int i = 0; i < n; ++i) {
    cloud.positions.emplace_back(d(rng), d(rng), d(rng));
    if (normals)
      cloud.normals.push_back(Eigen::Vector3d(d(rng), d(rng), d(rng) + 3.0).normalized());
  }
  return cloud;
}

}  // namespace

TEST_CASE("ply: binary and ascii roundtrips are exact") {
  TempDir dir;
  PointCloud cloud = sample_cloud(64, true);
  for (bool binary : {true, false}) {
    std::string path = dir.file(binary ? "a.ply" : "b.ply");
    write_ply(path, cloud, binary);
    PointCloud back = read_ply(path);
    REQUIRE(back.size() == cloud.size());
    REQUIRE(back.has_normals());
    for (int i = 0; i < cloud.size(); ++i) {
      CHECK(back.positions[static_cast<size_t>(i)] ==
            cloud.positions[static_cast<size_t>(i)]);
      CHECK(back.normals[static_cast<size_t>(i)] ==
            cloud.normals[static_cast<size_t>(i)]);
    }
  }
}

TEST_CASE("ply: foreign properties and elements are skipped") {
  TempDir dir;
  std::string path = dir.file("foreign.ply");
  std::ofstream out(path);
  out << "ply\nformat ascii 1.0\ncomment made elsewhere\n"
         "element vertex 2\n"
         "property float x\nproperty float y\nproperty float z\n"
         "property uchar red\n"
         "element face 1\n"
         "property list uchar int vertex_indices\n"
         "end_header\n"
         "1 2 3 255\n"
         "4 5 6 128\n"
         "3 0 1 0\n";
  out.close();
  PointCloud cloud = read_ply(path);
  REQUIRE(cloud.size() == 2);
  CHECK(cloud.positions[0] == Eigen::Vector3d(1, 2, 3));
  CHECK(cloud.positions[1] == Eigen::Vector3d(4, 5, 6));
  CHECK_FALSE(cloud.has_normals());
}

TEST_CASE("ply: malformed files raise io errors") {
  TempDir dir;
  std::string path = dir.file("bad.ply");
  std::ofstream(path) << "not a ply\n";
  CHECK_THROWS_AS(read_ply(path), IoError);
  CHECK_THROWS_AS(read_ply(dir.file("missing.ply")), IoError);
}

TEST_CASE("ppm: roundtrip and format guards") {
  TempDir dir;
  Image img = Image::filled(9, 5, {10, 200, 30});
  img.at(3, 2)[0] = 99;
  std::string path = dir.file("img.ppm");
  write_ppm(path, img);
  Image back = read_ppm(path);
  CHECK(back.width == 9);
  CHECK(back.height == 5);
  CHECK(back.pixels == img.pixels);

  std::ofstream(dir.file("gray.ppm")) << "P5\n2 2\n255\nxxxx";
  CHECK_THROWS_AS(read_ppm(dir.file("gray.ppm")), IoError);
  std::ofstream(dir.file("deep.ppm")) << "P6\n1 1\n65535\nxxxxxx";
  CHECK_THROWS_AS(read_ppm(dir.file("deep.ppm")), IoError);
  std::ofstream(dir.file("cut.ppm")) << "P6\n4 4\n255\nxx";
  CHECK_THROWS_AS(read_ppm(dir.file("cut.ppm")), IoError);
}

TEST_CASE("rig: roundtrip with layout metadata") {
  TempDir dir;
  CameraRig rig;
  rig.circles = 3;
  rig.per_circle = 4;
  for (int c = 0; c < 3; ++c)
    for (int s = 0; s < 4; ++s) {
      double phi = 2.0 * M_PI * s / 4.0;
      rig.cameras.push_back(look_at_camera(
          {3.0 * std::cos(phi), 3.0 * std::sin(phi), -1.0 + c}, {0, 0, 0}, 64.0, 64, 48));
    }
  std::string path = dir.file("rig.txt");
  write_rig(path, rig);
  CameraRig back = read_rig(path);
  CHECK(back.circles == 3);
  CHECK(back.per_circle == 4);
  REQUIRE(back.cameras.size() == 12);
  for (size_t i = 0; i < 12; ++i) {
    CHECK(back.cameras[i].intrinsics == rig.cameras[i].intrinsics);
    CHECK(back.cameras[i].rotation == rig.cameras[i].rotation);
    CHECK(back.cameras[i].translation == rig.cameras[i].translation);
    CHECK(back.cameras[i].width == 64);
    CHECK(back.cameras[i].height == 48);
  }

  std::ofstream(dir.file("badrig.txt")) << "0 1 2 3\n";
  CHECK_THROWS_AS(read_rig(dir.file("badrig.txt")), IoError);
}

TEST_CASE("coefficients: roundtrip is exact") {
  TempDir dir;
  SlfCoefficients coeffs;
  coeffs.spec = BasisSpec{2, 2, 1};
  std::mt19937 rng(7);
  std::normal_distribution<double> d(0.0, 30.0);
  coeffs.channels.assign(3, Eigen::MatrixXd(5, 8));
  for (auto& ch : coeffs.channels)
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 8; ++c) ch(r, c) = d(rng);

  std::string path = dir.file("coeffs.txt");
  write_coefficients(path, coeffs);
  SlfCoefficients back = read_coefficients(path);
  CHECK(back.spec.order == 2);
  CHECK(back.spec.scale_theta == 2);
  CHECK(back.spec.scale_gamma == 1);
  REQUIRE(back.channel_count() == 3);
  for (int ch = 0; ch < 3; ++ch)
    CHECK(back.channels[static_cast<size_t>(ch)] ==
          coeffs.channels[static_cast<size_t>(ch)]);

  std::ofstream(dir.file("short.txt")) << "# slf-coeffs points=2 channels=1 n=8 "
                                          "order=2 scale-theta=2 scale-gamma=1\n"
                                          "0 0 1 2 3 4 5 6 7 8\n";
  CHECK_THROWS_AS(read_coefficients(dir.file("short.txt")), IoError);
}

TEST_CASE("write_file_atomic: failure leaves no partial file") {
  TempDir dir;
  std::string target = dir.file("nodir/out.txt");
  CHECK_THROWS_AS(write_file_atomic(target, "hello"), IoError);
  CHECK_FALSE(fs::exists(target));
  std::string ok = dir.file("out.txt");
  write_file_atomic(ok, "hello");
  CHECK(fs::exists(ok));
  CHECK_FALSE(fs::exists(ok + ".tmp"));
}
