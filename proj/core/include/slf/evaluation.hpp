// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "slf/bitstream.hpp"
#include "slf/fitting.hpp"
#include "slf/scene.hpp"

namespace slf {

enum class SplitMode { kDense, kIntermediate, kSparse };

SplitMode split_mode_from_string(const std::string& name);
std::string to_string(SplitMode mode);

struct EvalConfig {
  double delta_prime = 10.0;     // evaluation cone, degrees in [0, 90)
  SplitMode split = SplitMode::kDense;
  bool eval_on_input = false;    // score the input set instead of the held-out set

  void validate() const;
};

struct CameraSplit {
  std::vector<int> input_ids;
  std::vector<int> eval_ids;
};

/// Deterministic partition of a circles x per_circle rig: input cameras take
/// every 2^m-th circle starting at circle 1 and every 2^m-th slot starting
/// at 0, with m = 1, 2, 3 for dense, intermediate, sparse. For an 11x50 rig
/// this yields 125/425, 39/511 and 14/536.
CameraSplit split_cameras(int circles, int per_circle, SplitMode mode);

/// Point-wise PSNR: MSE over all (point, valid evaluation camera, channel)
/// samples of reconstruction minus the bilinear image color, peak 255.
/// Returns 100 dB when the MSE is exactly zero. Throws InvalidArgument when
/// no sample is valid.
double slf_psnr(const SlfCoefficients& coeffs, const PointCloud& cloud,
                const std::vector<CameraModel>& cameras,
                const std::vector<Image>& images, double delta_prime_deg,
                double depth_eps, int threads = 0);

/// Same metric over a prebuilt observation set, re-filtered by delta_prime.
double psnr_from_observations(const SlfCoefficients& coeffs, const PointCloud& cloud,
                              const ObservationSet& obs, double delta_prime_deg,
                              int threads = 0);

/// Copies per-voxel coefficient rows back onto the original points through
/// the voxelizer's point map.
SlfCoefficients spread_to_points(const SlfCoefficients& voxel_coeffs,
                                 const VoxelCloud& vox);

/// Evaluation-cone grid used by the RD sweeps.
inline constexpr std::array<double, 4> kDeltaPrimeGrid = {0.0, 10.0, 20.0, 30.0};

enum class SweepAxis { kQStep, kBasisCount, kDepth };

SweepAxis sweep_axis_from_string(const std::string& name);

/// Scale pair for a power-of-two basis count: s0 = s1 + 1 when the exponent
/// is odd (the default resolution link), s0 = s1 otherwise.
BasisSpec spec_for_count(int order, int basis_count);

struct SweepSettings {
  SyntheticScene scene;
  /// Split and metric target; the sweep reports the whole delta-prime grid,
  /// so eval.delta_prime itself is not consulted here.
  EvalConfig eval;
  FitConfig fit;
  BasisSpec spec;
  double delta_deg = 10.0;
  double q_step = 8.0;
  int depth = 10;
  int threads = 0;
};

struct SweepRow {
  double setting = 0.0;
  uint64_t total_bits = 0;
  std::array<double, 4> psnr{};  // at kDeltaPrimeGrid
};

/// Full fit -> encode -> decode -> evaluate loop per setting value.
std::vector<SweepRow> rd_sweep(const SweepSettings& settings, SweepAxis axis,
                               const std::vector<double>& values);

/// Machine-readable table:
/// setting,total_bits,psnr_d0,psnr_d10,psnr_d20,psnr_d30
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace slf
