// SPDX-License-Identifier: Apache-2.0
// Command-line front end for the surface light field pipeline: synthetic
// capture, view-map fitting, stream codec, rendering and RD evaluation.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "slf/bitstream.hpp"
#include "slf/evaluation.hpp"
#include "slf/io.hpp"
#include "slf/renderer.hpp"
#include "slf/scene.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string image_name(int camera_id) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "cam_%04d.ppm", camera_id);
  return buf;
}

Eigen::Vector3d parse_vec3(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3)
    throw slf::ConfigError("scene field '" + field + "' must be a 3-array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

slf::SyntheticScene scene_from_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw slf::IoError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw slf::ConfigError(std::string("scene file is not valid JSON: ") + e.what());
  }
  slf::SyntheticScene scene;
  try {
    if (j.contains("shape")) {
      std::string shape = j["shape"].get<std::string>();
      if (shape == "sphere") scene.shape = slf::SyntheticScene::Shape::kSphere;
      else if (shape == "cylinder") scene.shape = slf::SyntheticScene::Shape::kCylinder;
      else throw slf::ConfigError("scene field 'shape' must be sphere or cylinder");
    }
    if (j.contains("point_count")) scene.point_count = j["point_count"].get<int>();
    if (j.contains("material")) {
      const json& m = j["material"];
      if (m.contains("diffuse")) scene.material.diffuse = m["diffuse"].get<double>();
      if (m.contains("specular")) scene.material.specular = m["specular"].get<double>();
      if (m.contains("shininess")) scene.material.shininess = m["shininess"].get<double>();
    }
    if (j.contains("lights")) {
      scene.lights.clear();
      for (const json& lj : j["lights"]) {
        slf::Light light;
        light.direction = parse_vec3(lj.at("direction"), "lights.direction").normalized();
        if (lj.contains("intensity")) {
          if (lj["intensity"].is_number()) {
            double v = lj["intensity"].get<double>();
            light.intensity = Eigen::Vector3d(v, v, v);
          } else {
            light.intensity = parse_vec3(lj["intensity"], "lights.intensity");
          }
        }
        scene.lights.push_back(light);
      }
    }
    if (j.contains("rig")) {
      const json& r = j["rig"];
      if (r.contains("circles")) scene.rig_circles = r["circles"].get<int>();
      if (r.contains("per_circle")) scene.rig_per_circle = r["per_circle"].get<int>();
      if (r.contains("distance")) scene.rig_distance = r["distance"].get<double>();
      if (r.contains("z_span")) scene.rig_z_span = r["z_span"].get<double>();
    }
    if (j.contains("image")) {
      scene.image_width = j["image"].value("width", scene.image_width);
      scene.image_height = j["image"].value("height", scene.image_height);
    }
    if (j.contains("splat_radius")) scene.splat_radius = j["splat_radius"].get<int>();
  } catch (const json::exception& e) {
    throw slf::ConfigError(std::string("scene field error: ") + e.what());
  }
  try {
    scene.validate();
  } catch (const slf::Error& e) {
    throw slf::ConfigError(std::string("scene: ") + e.what());
  }
  return scene;
}

std::vector<slf::Image> load_images(const std::string& dir,
                                    const std::vector<slf::CameraModel>& cams) {
  std::vector<slf::Image> images;
  images.reserve(cams.size());
  for (size_t i = 0; i < cams.size(); ++i) {
    fs::path p = fs::path(dir) / image_name(static_cast<int>(i));
    if (!fs::exists(p))
      throw slf::IoError("missing image " + p.string() + " for camera " +
                         std::to_string(i));
    slf::Image img = slf::read_ppm(p.string());
    if (img.width != cams[i].width || img.height != cams[i].height)
      throw slf::InvalidArgument("image " + p.string() +
                                 " size disagrees with its camera");
    images.push_back(std::move(img));
  }
  return images;
}

double default_depth_eps(const slf::PointCloud& cloud) {
  return 1e-4 * slf::bounding_diameter(cloud.positions);
}

std::string ppm_bytes(const slf::Image& img) {
  std::ostringstream out;
  out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  return out.str();
}

struct FitOptions {
  slf::BasisSpec spec;
  bool uneven_scales = false;
  slf::FitConfig config;
  double delta = 10.0;
  double depth_eps = -1.0;
  int threads = 0;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--order", spec.order, "B-spline wavelet order (1..4)");
    cmd->add_option("--scale-theta", spec.scale_theta, "azimuth scale s0");
    cmd->add_option("--scale-gamma", spec.scale_gamma, "elevation scale s1");
    cmd->add_flag("--uneven-scales", uneven_scales,
                  "allow scale pairs that break s0 = s1 + 1");
    cmd->add_option("--lambda", config.lambda, "ridge regularization");
    cmd->add_option("--beta", config.beta, "spatial smoothing strength");
    cmd->add_option("--iters", config.max_iters, "smoothing iterations T");
    cmd->add_option("--neighbors", config.neighbor_count, "neighbor count k");
    cmd->add_option("--tol", config.convergence_tol, "relative-change early exit");
    cmd->add_option("--delta", delta, "validity cone angle in degrees");
    cmd->add_option("--depth-eps", depth_eps,
                    "z-buffer depth tolerance (default 1e-4 x diameter)");
    cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
  }
  void validate_spec() const { spec.validate(!uneven_scales); }
};

// ---------------------------------------------------------------------------

int cmd_synth(const std::string& scene_path, const std::string& out_dir) {
  slf::SyntheticScene config = scene_from_json(scene_path);
  slf::SceneData data = slf::synth_scene(config);
  fs::create_directories(fs::path(out_dir) / "images");

  // Per-file atomicity: the PLY goes to a temp name and is renamed in.
  std::string cloud_path = (fs::path(out_dir) / "cloud.ply").string();
  slf::write_ply(cloud_path + ".tmp", data.cloud);
  if (std::rename((cloud_path + ".tmp").c_str(), cloud_path.c_str()) != 0) {
    std::remove((cloud_path + ".tmp").c_str());
    throw slf::IoError("cannot move " + cloud_path + ".tmp into place");
  }
  slf::CameraRig rig;
  rig.cameras = data.cameras;
  rig.circles = config.rig_circles;
  rig.per_circle = config.rig_per_circle;
  slf::write_rig((fs::path(out_dir) / "rig.txt").string(), rig);
  for (size_t i = 0; i < data.cameras.size(); ++i) {
    slf::Image img = data.ground_truth(static_cast<int>(i));
    slf::write_file_atomic(
        (fs::path(out_dir) / "images" / image_name(static_cast<int>(i))).string(),
        ppm_bytes(img));
  }
  std::cout << "synth: " << data.cloud.size() << " points, " << data.cameras.size()
            << " cameras -> " << out_dir << "\n";
  return 0;
}

int cmd_fit(const std::string& cloud_path, const std::string& rig_path,
            const std::string& images_dir, const std::string& out_path,
            const FitOptions& opt, int estimate_normals_k) {
  opt.validate_spec();
  opt.config.validate();
  slf::PointCloud cloud = slf::read_ply(cloud_path);
  if (!cloud.has_normals()) {
    if (estimate_normals_k <= 0)
      throw slf::InvalidArgument(
          "cloud has no normals; pass --estimate-normals <k> to derive them");
    cloud.normals = slf::estimate_normals(cloud.positions, estimate_normals_k);
  }
  slf::CameraRig rig = slf::read_rig(rig_path);
  std::vector<slf::Image> images = load_images(images_dir, rig.cameras);
  double eps = opt.depth_eps >= 0.0 ? opt.depth_eps : default_depth_eps(cloud);
  slf::ObservationSet obs = slf::build_observations(cloud, rig.cameras, images,
                                                    opt.delta, eps, opt.threads);
  slf::SolveResult res =
      slf::solve_slf(obs, cloud, opt.spec, opt.config, opt.threads);
  slf::write_coefficients(out_path, res.coefficients);
  std::cout << "fit: " << cloud.size() << " points, " << obs.total()
            << " observations, " << res.iterations.size() << " iterations -> "
            << out_path << "\n";
  return 0;
}

int cmd_encode(const std::string& cloud_path, const std::string& coeffs_path,
               const std::string& out_path, double q, int depth) {
  slf::PointCloud cloud = slf::read_ply(cloud_path);
  slf::SlfCoefficients coeffs = slf::read_coefficients(coeffs_path);
  slf::EncodeResult enc = slf::encode_stream(cloud, coeffs, q, depth);
  std::vector<uint8_t> bytes = enc.stream.serialize();
  slf::write_file_atomic(out_path,
                         std::string(bytes.begin(), bytes.end()));
  std::cout << "encode: " << enc.vox.voxel_count() << " voxels, "
            << bytes.size() * 8 << " bits (geometry "
            << enc.stream.geometry_bytes() * 8 << ", planes "
            << enc.stream.plane_bytes() * 8 << ") -> " << out_path << "\n";
  return 0;
}

std::vector<uint8_t> read_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw slf::IoError("cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  return bytes;
}

int cmd_decode(const std::string& in_path, const std::string& out_cloud,
               const std::string& out_coeffs, bool ascii) {
  slf::DecodeResult dec = slf::decode_stream(read_binary(in_path));
  slf::PointCloud cloud;
  cloud.positions.reserve(dec.vox.coords.size());
  for (const auto& c : dec.vox.coords)
    cloud.positions.emplace_back(c[0], c[1], c[2]);
  if (!out_cloud.empty()) slf::write_ply(out_cloud, cloud, !ascii);
  if (!out_coeffs.empty()) slf::write_coefficients(out_coeffs, dec.coefficients);
  std::cout << "decode: " << dec.vox.voxel_count() << " voxels, Q = " << dec.q_step
            << "\n";
  return 0;
}

int cmd_render(const std::string& stream_path, const std::string& cloud_path,
               const std::string& coeffs_path, const std::string& rig_path,
               int camera_id, const slf::RenderConfig& cfg_in,
               const std::string& out_path) {
  slf::PointCloud cloud;
  slf::SlfCoefficients coeffs;
  if (!stream_path.empty()) {
    slf::DecodeResult dec = slf::decode_stream(read_binary(stream_path));
    for (const auto& c : dec.vox.coords) cloud.positions.emplace_back(c[0], c[1], c[2]);
    coeffs = dec.coefficients;
  } else {
    cloud = slf::read_ply(cloud_path);
    coeffs = slf::read_coefficients(coeffs_path);
  }
  slf::CameraRig rig = slf::read_rig(rig_path);
  if (camera_id < 0 || camera_id >= static_cast<int>(rig.cameras.size()))
    throw slf::InvalidArgument("camera id out of range for rig");
  slf::CameraModel cam = rig.cameras[static_cast<size_t>(camera_id)];
  slf::RenderConfig cfg = cfg_in;
  if (cfg.width <= 0) cfg.width = cam.width;
  if (cfg.height <= 0) cfg.height = cam.height;
  // Keep the principal point centered when rendering at a different size.
  cam.intrinsics(0, 2) *= static_cast<double>(cfg.width) / cam.width;
  cam.intrinsics(1, 2) *= static_cast<double>(cfg.height) / cam.height;
  cam.intrinsics(0, 0) *= static_cast<double>(cfg.width) / cam.width;
  cam.intrinsics(1, 1) *= static_cast<double>(cfg.height) / cam.height;
  cam.width = cfg.width;
  cam.height = cfg.height;
  slf::Image img = slf::render_slf(cloud, coeffs, cam, cfg);
  slf::write_file_atomic(out_path, ppm_bytes(img));
  std::cout << "render: camera " << camera_id << " -> " << out_path << "\n";
  return 0;
}

int cmd_eval(const std::string& cloud_path, const std::string& coeffs_path,
             const std::string& rig_path, const std::string& images_dir,
             const std::vector<double>& delta_primes, double depth_eps, int threads,
             const std::string& out_path, bool self_check,
             const std::string& scene_path) {
  std::ostringstream csv;
  csv << "delta_prime,psnr\n";
  csv.precision(10);
  if (self_check) {
    // Oracle against itself: validates the metric plumbing end to end.
    slf::SceneData data = slf::synth_scene(scene_from_json(scene_path));
    slf::ObservationSet obs;
    obs.per_point.resize(static_cast<size_t>(data.cloud.size()));
    for (int pi = 0; pi < data.cloud.size(); ++pi) {
      for (size_t ci = 0; ci < data.cameras.size(); ++ci) {
        slf::Observation ob;
        ob.direction = slf::direction_params(
            data.cloud.positions[static_cast<size_t>(pi)],
            data.cameras[ci].center());
        ob.color = data.oracle_color(pi, ob.direction);
        ob.camera_id = static_cast<int>(ci);
        obs.per_point[static_cast<size_t>(pi)].push_back(ob);
      }
    }
    double sse = 0.0;
    size_t count = 0;
    for (int pi = 0; pi < data.cloud.size(); ++pi) {
      for (const auto& ob : obs.per_point[static_cast<size_t>(pi)]) {
        Eigen::Vector3d rec = data.oracle_color(pi, ob.direction);
        sse += (rec - ob.color).squaredNorm();
        count += 3;
      }
    }
    double psnr = (count && sse == 0.0)
                      ? 100.0
                      : 10.0 * std::log10(255.0 * 255.0 * count / sse);
    for (double dp : delta_primes) csv << dp << ',' << psnr << '\n';
  } else {
    slf::PointCloud cloud = slf::read_ply(cloud_path);
    if (!cloud.has_normals())
      throw slf::InvalidArgument("eval needs normals in the cloud");
    slf::SlfCoefficients coeffs = slf::read_coefficients(coeffs_path);
    slf::CameraRig rig = slf::read_rig(rig_path);
    std::vector<slf::Image> images = load_images(images_dir, rig.cameras);
    double eps = depth_eps >= 0.0 ? depth_eps : default_depth_eps(cloud);
    slf::ObservationSet obs =
        slf::build_observations(cloud, rig.cameras, images, 0.0, eps, threads);
    for (double dp : delta_primes) {
      slf::EvalConfig cfg;
      cfg.delta_prime = dp;
      cfg.validate();
      double psnr =
          slf::psnr_from_observations(coeffs, cloud, obs, cfg.delta_prime, threads);
      csv << dp << ',' << psnr << '\n';
    }
  }
  if (out_path.empty()) std::cout << csv.str();
  else slf::write_file_atomic(out_path, csv.str());
  return 0;
}

int cmd_rd_sweep(const std::string& scene_path, const std::string& axis_name,
                 const std::vector<double>& values, const std::string& split_name,
                 const FitOptions& opt, double q, int depth, bool eval_on_input,
                 const std::string& out_path) {
  slf::SweepSettings settings;
  settings.scene = scene_from_json(scene_path);
  settings.eval.split = slf::split_mode_from_string(split_name);
  settings.fit = opt.config;
  settings.spec = opt.spec;
  settings.delta_deg = opt.delta;
  settings.q_step = q;
  settings.depth = depth;
  settings.eval.eval_on_input = eval_on_input;
  settings.threads = opt.threads;
  opt.validate_spec();
  std::vector<slf::SweepRow> rows =
      slf::rd_sweep(settings, slf::sweep_axis_from_string(axis_name), values);
  std::string csv = slf::sweep_csv(rows);
  if (out_path.empty()) std::cout << csv;
  else slf::write_file_atomic(out_path, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"surface light field codec pipeline"};
  app.require_subcommand(1);
  uint64_t seed = 0;
  app.add_option("--seed", seed,
                 "reserved; all commands are deterministic for fixed inputs");

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic capture");
  std::string scene_path, out_dir;
  synth->add_option("--scene", scene_path, "scene JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  synth->add_option("--out", out_dir, "output directory")->required();

  // fit
  auto* fit = app.add_subcommand("fit", "fit view-map coefficients");
  std::string fit_cloud, fit_rig, fit_images, fit_out;
  FitOptions fit_opt;
  int estimate_k = 0;
  fit->add_option("--cloud", fit_cloud)->required()->check(CLI::ExistingFile);
  fit->add_option("--rig", fit_rig)->required()->check(CLI::ExistingFile);
  fit->add_option("--images", fit_images)->required()->check(CLI::ExistingDirectory);
  fit->add_option("--out", fit_out)->required();
  fit->add_option("--estimate-normals", estimate_k,
                  "derive normals from k nearest neighbors when absent");
  fit_opt.add_flags(fit);

  // encode
  auto* encode = app.add_subcommand("encode", "compress coefficients to .slf");
  std::string enc_cloud, enc_coeffs, enc_out;
  double q_step = 8.0;
  int depth = 10;
  encode->add_option("--cloud", enc_cloud)->required()->check(CLI::ExistingFile);
  encode->add_option("--coeffs", enc_coeffs)->required()->check(CLI::ExistingFile);
  encode->add_option("--out", enc_out)->required();
  encode->add_option("--q", q_step, "quantization step");
  encode->add_option("--depth", depth, "octree depth D");

  // decode
  auto* decode = app.add_subcommand("decode", "decompress an .slf stream");
  std::string dec_in, dec_cloud, dec_coeffs;
  bool dec_ascii = false;
  decode->add_option("--in", dec_in)->required()->check(CLI::ExistingFile);
  decode->add_option("--out-cloud", dec_cloud, "voxel-space PLY output");
  decode->add_option("--out-coeffs", dec_coeffs, "coefficient dump output");
  decode->add_flag("--ascii", dec_ascii, "write the PLY as ascii");

  // render
  auto* render = app.add_subcommand("render", "render a viewpoint");
  std::string r_stream, r_cloud, r_coeffs, r_rig, r_out;
  int camera_id = 0;
  slf::RenderConfig rc;
  rc.width = rc.height = 0;  // default to the camera's own size
  render->add_option("--in", r_stream, ".slf stream (voxel-space render)")
      ->check(CLI::ExistingFile);
  render->add_option("--cloud", r_cloud)->check(CLI::ExistingFile);
  render->add_option("--coeffs", r_coeffs)->check(CLI::ExistingFile);
  render->add_option("--rig", r_rig)->required()->check(CLI::ExistingFile);
  render->add_option("--camera-id", camera_id);
  render->add_option("--width", rc.width);
  render->add_option("--height", rc.height);
  render->add_option("--splat-radius", rc.splat_radius);
  render->add_option("--out", r_out)->required();

  // eval
  auto* eval = app.add_subcommand("eval", "point-wise PSNR against images");
  std::string e_cloud, e_coeffs, e_rig, e_images, e_out, e_scene;
  std::vector<double> delta_primes = {0.0, 10.0, 20.0, 30.0};
  double e_eps = -1.0;
  int e_threads = 0;
  bool self_check = false;
  eval->add_option("--cloud", e_cloud)->check(CLI::ExistingFile);
  eval->add_option("--coeffs", e_coeffs)->check(CLI::ExistingFile);
  eval->add_option("--rig", e_rig)->check(CLI::ExistingFile);
  eval->add_option("--images", e_images)->check(CLI::ExistingDirectory);
  eval->add_option("--delta-prime", delta_primes, "evaluation cone angles")
      ->delimiter(',');
  eval->add_option("--depth-eps", e_eps);
  eval->add_option("--threads", e_threads);
  eval->add_option("--out", e_out, "write CSV here instead of stdout");
  eval->add_flag("--self-check", self_check, "score the analytic oracle against itself");
  eval->add_option("--scene", e_scene, "scene JSON (for --self-check)")
      ->check(CLI::ExistingFile);

  // rd-sweep
  auto* sweep = app.add_subcommand("rd-sweep", "rate-distortion sweep table");
  std::string s_scene, s_axis = "q", s_split = "dense", s_out;
  std::vector<double> s_values;
  FitOptions sweep_opt;
  double s_q = 8.0;
  int s_depth = 10;
  bool s_eval_input = false;
  sweep->add_option("--scene", s_scene)->required()->check(CLI::ExistingFile);
  sweep->add_option("--axis", s_axis, "q, n or d");
  sweep->add_option("--values", s_values, "sweep values")->required()->delimiter(',');
  sweep->add_option("--split", s_split, "dense, intermediate or sparse");
  sweep->add_option("--q", s_q, "fixed Q for n/d sweeps");
  sweep->add_option("--depth", s_depth, "fixed octree depth");
  sweep->add_flag("--eval-on-input", s_eval_input, "score the input camera set");
  sweep->add_option("--out", s_out, "write CSV here instead of stdout");
  sweep_opt.add_flags(sweep);

  try {
    app.parse(argc, argv);
    if (*synth) return cmd_synth(scene_path, out_dir);
    if (*fit) return cmd_fit(fit_cloud, fit_rig, fit_images, fit_out, fit_opt, estimate_k);
    if (*encode) return cmd_encode(enc_cloud, enc_coeffs, enc_out, q_step, depth);
    if (*decode) return cmd_decode(dec_in, dec_cloud, dec_coeffs, dec_ascii);
    if (*render) {
      if (r_stream.empty() && (r_cloud.empty() || r_coeffs.empty()))
        throw slf::ConfigError("render needs --in or both --cloud and --coeffs");
      return cmd_render(r_stream, r_cloud, r_coeffs, r_rig, camera_id, rc, r_out);
    }
    if (*eval) {
      if (self_check && e_scene.empty())
        throw slf::ConfigError("--self-check requires --scene");
      if (!self_check && (e_cloud.empty() || e_coeffs.empty() || e_rig.empty() ||
                          e_images.empty()))
        throw slf::ConfigError("eval needs --cloud, --coeffs, --rig and --images");
      return cmd_eval(e_cloud, e_coeffs, e_rig, e_images, delta_primes, e_eps,
                      e_threads, e_out, self_check, e_scene);
    }
    if (*sweep)
      return cmd_rd_sweep(s_scene, s_axis, s_values, s_split, sweep_opt, s_q, s_depth,
                          s_eval_input, s_out);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "slf: error: config-error: " << e.what() << "\n";
    return 2;
  } catch (const slf::Error& e) {
    std::cerr << "slf: error: " << e.category() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "slf: error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
