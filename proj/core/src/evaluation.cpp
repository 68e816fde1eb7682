// SPDX-License-Identifier: Apache-2.0
#include "slf/evaluation.hpp"

#include <cmath>
#include <sstream>

#include "slf/parallel.hpp"

namespace slf {

SplitMode split_mode_from_string(const std::string& name) {
  if (name == "dense") return SplitMode::kDense;
  if (name == "intermediate") return SplitMode::kIntermediate;
  if (name == "sparse") return SplitMode::kSparse;
  throw ConfigError("unknown split mode: " + name);
}

std::string to_string(SplitMode mode) {
  switch (mode) {
    case SplitMode::kDense: return "dense";
    case SplitMode::kIntermediate: return "intermediate";
    case SplitMode::kSparse: return "sparse";
  }
  return "?";
}

SweepAxis sweep_axis_from_string(const std::string& name) {
  if (name == "q") return SweepAxis::kQStep;
  if (name == "n") return SweepAxis::kBasisCount;
  if (name == "d") return SweepAxis::kDepth;
  throw ConfigError("unknown sweep axis: " + name + " (expected q, n or d)");
}

void EvalConfig::validate() const {
  if (!(delta_prime >= 0.0 && delta_prime < 90.0))
    throw InvalidArgument("eval config: delta_prime must be in [0, 90)");
}

CameraSplit split_cameras(int circles, int per_circle, SplitMode mode) {
  if (circles < 1 || per_circle < 1)
    throw InvalidArgument("split_cameras: empty rig");
  int stride = 2;
  if (mode == SplitMode::kIntermediate) stride = 4;
  if (mode == SplitMode::kSparse) stride = 8;

  std::vector<uint8_t> circle_in(static_cast<size_t>(circles), 0);
  std::vector<uint8_t> slot_in(static_cast<size_t>(per_circle), 0);
  for (int c = 1; c < circles; c += stride) circle_in[static_cast<size_t>(c)] = 1;
  for (int s = 0; s < per_circle; s += stride) slot_in[static_cast<size_t>(s)] = 1;

  CameraSplit split;
  for (int c = 0; c < circles; ++c) {
    for (int s = 0; s < per_circle; ++s) {
      int id = c * per_circle + s;
      if (circle_in[static_cast<size_t>(c)] && slot_in[static_cast<size_t>(s)])
        split.input_ids.push_back(id);
      else
        split.eval_ids.push_back(id);
    }
  }
  if (split.input_ids.empty())
    throw InvalidArgument("split_cameras: rig too small for this mode");
  return split;
}

namespace {

// Sum of squared errors and sample count over cone-filtered observations.
std::pair<double, size_t> accumulate_errors(const SlfCoefficients& coeffs,
                                            const PointCloud& cloud,
                                            const ObservationSet& obs,
                                            double delta_prime_deg, int threads) {
  if (!(delta_prime_deg >= 0.0 && delta_prime_deg < 90.0))
    throw InvalidArgument("psnr: delta_prime must be in [0, 90)");
  if (obs.point_count() != cloud.size())
    throw InvalidArgument("psnr: observation/point count mismatch");
  if (coeffs.point_count() != cloud.size())
    throw InvalidArgument("psnr: coefficient/point count mismatch");

  int n_pts = cloud.size();
  int n_ch = std::min(coeffs.channel_count(), 3);
  double cone_min = std::sin(delta_prime_deg * M_PI / 180.0);
  BasisEvaluator eval(coeffs.spec);

  std::vector<double> sq(static_cast<size_t>(n_pts), 0.0);
  std::vector<size_t> cnt(static_cast<size_t>(n_pts), 0);
  parallel_for(0, n_pts, threads, [&](int pi) {
    const Eigen::Vector3d& n = cloud.normals[static_cast<size_t>(pi)];
    Eigen::VectorXd g;
    for (const Observation& ob : obs.per_point[static_cast<size_t>(pi)]) {
      double cos_el = std::sqrt(std::max(0.0, 1.0 - ob.direction.gamma * ob.direction.gamma));
      Eigen::Vector3d w(cos_el * std::cos(ob.direction.theta),
                        cos_el * std::sin(ob.direction.theta), ob.direction.gamma);
      if (n.dot(w) < cone_min) continue;
      eval.row_into(ob.direction, g);
      for (int ch = 0; ch < n_ch; ++ch) {
        double rec = g.dot(coeffs.channels[static_cast<size_t>(ch)].row(pi));
        rec = std::clamp(rec, 0.0, 255.0);
        double err = rec - ob.color[ch];
        sq[static_cast<size_t>(pi)] += err * err;
      }
      cnt[static_cast<size_t>(pi)] += static_cast<size_t>(n_ch);
    }
  });
  double total = 0.0;
  size_t samples = 0;
  for (int pi = 0; pi < n_pts; ++pi) {
    total += sq[static_cast<size_t>(pi)];
    samples += cnt[static_cast<size_t>(pi)];
  }
  return {total, samples};
}

double psnr_from_sse(double sse, size_t samples) {
  if (samples == 0) throw InvalidArgument("psnr: no valid (point, camera) samples");
  double mse = sse / static_cast<double>(samples);
  if (mse == 0.0) return 100.0;
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

}  // namespace

double psnr_from_observations(const SlfCoefficients& coeffs, const PointCloud& cloud,
                              const ObservationSet& obs, double delta_prime_deg,
                              int threads) {
  auto [sse, samples] = accumulate_errors(coeffs, cloud, obs, delta_prime_deg, threads);
  return psnr_from_sse(sse, samples);
}

double slf_psnr(const SlfCoefficients& coeffs, const PointCloud& cloud,
                const std::vector<CameraModel>& cameras,
                const std::vector<Image>& images, double delta_prime_deg,
                double depth_eps, int threads) {
  ObservationSet obs =
      build_observations(cloud, cameras, images, delta_prime_deg, depth_eps, threads);
  return psnr_from_observations(coeffs, cloud, obs, delta_prime_deg, threads);
}

SlfCoefficients spread_to_points(const SlfCoefficients& voxel_coeffs,
                                 const VoxelCloud& vox) {
  SlfCoefficients out;
  out.spec = voxel_coeffs.spec;
  out.channels.reserve(voxel_coeffs.channels.size());
  for (const auto& plane : voxel_coeffs.channels) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(vox.point_map.size()), plane.cols());
    for (size_t pi = 0; pi < vox.point_map.size(); ++pi)
      m.row(static_cast<Eigen::Index>(pi)) = plane.row(vox.point_map[pi]);
    out.channels.push_back(std::move(m));
  }
  return out;
}

BasisSpec spec_for_count(int order, int basis_count) {
  if (basis_count < 1 || (basis_count & (basis_count - 1)) != 0)
    throw InvalidArgument("basis count must be a power of two");
  int e = 0;
  while ((1 << e) < basis_count) ++e;
  BasisSpec spec;
  spec.order = order;
  spec.scale_theta = (e + 1) / 2;
  spec.scale_gamma = e / 2;
  return spec;
}

std::vector<SweepRow> rd_sweep(const SweepSettings& settings, SweepAxis axis,
                               const std::vector<double>& values) {
  if (values.empty()) throw InvalidArgument("rd_sweep: no settings given");
  SceneData data = synth_scene(settings.scene);
  CameraSplit split = split_cameras(settings.scene.rig_circles,
                                    settings.scene.rig_per_circle,
                                    settings.eval.split);
  const std::vector<int>& score_ids =
      settings.eval.eval_on_input ? split.input_ids : split.eval_ids;
  if (score_ids.empty()) throw InvalidArgument("rd_sweep: empty evaluation set");

  auto gather = [&](const std::vector<int>& ids) {
    std::pair<std::vector<CameraModel>, std::vector<Image>> out;
    out.first.reserve(ids.size());
    out.second.reserve(ids.size());
    for (int id : ids) {
      out.first.push_back(data.cameras[static_cast<size_t>(id)]);
      out.second.push_back(data.ground_truth(id));
    }
    return out;
  };
  auto [in_cams, in_images] = gather(split.input_ids);
  auto [score_cams, score_images] = gather(score_ids);

  double depth_eps = 1e-4 * bounding_diameter(data.cloud.positions);
  ObservationSet fit_obs = build_observations(data.cloud, in_cams, in_images,
                                              settings.delta_deg, depth_eps,
                                              settings.threads);
  // Scoring observations are built once at delta' = 0 (the widest cone) and
  // re-filtered per grid angle.
  ObservationSet score_obs = build_observations(data.cloud, score_cams, score_images,
                                                0.0, depth_eps, settings.threads);

  std::vector<SweepRow> rows;
  SlfCoefficients fitted;
  bool have_fit = false;
  for (double value : values) {
    BasisSpec spec = settings.spec;
    double q = settings.q_step;
    int depth = settings.depth;
    bool refit = !have_fit;
    switch (axis) {
      case SweepAxis::kQStep:
        q = value;
        break;
      case SweepAxis::kBasisCount:
        spec = spec_for_count(settings.spec.order, static_cast<int>(value));
        refit = true;
        break;
      case SweepAxis::kDepth:
        depth = static_cast<int>(value);
        break;
    }
    try {
      if (refit) {
        fitted = solve_slf(fit_obs, data.cloud, spec, settings.fit, settings.threads)
                     .coefficients;
        have_fit = true;
      }
      EncodeResult enc = encode_stream(data.cloud, fitted, q, depth);
      std::vector<uint8_t> bytes = enc.stream.serialize();
      DecodeResult dec = decode_stream(bytes);
      SlfCoefficients on_points = spread_to_points(dec.coefficients, enc.vox);

      SweepRow row;
      row.setting = value;
      row.total_bits = static_cast<uint64_t>(bytes.size()) * 8;
      for (size_t di = 0; di < kDeltaPrimeGrid.size(); ++di)
        row.psnr[di] = psnr_from_observations(on_points, data.cloud, score_obs,
                                              kDeltaPrimeGrid[di], settings.threads);
      rows.push_back(row);
    } catch (const Error& e) {
      throw Error(e.category(), "rd_sweep setting " + std::to_string(value) + ": " +
                                    e.what());
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "setting,total_bits,psnr_d0,psnr_d10,psnr_d20,psnr_d30\n";
  out.precision(6);
  for (const auto& r : rows) {
    out << r.setting << ',' << r.total_bits;
    for (double p : r.psnr) out << ',' << p;
    out << '\n';
  }
  return out.str();
}

}  // namespace slf
