// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "slf/fitting.hpp"
#include "slf/voxel.hpp"

namespace slf {

/// Self-contained compressed surface light field. Layout (little-endian):
/// magic "SLF1", version u8 = 1, depth u8, point count u32 (voxels after
/// merging), order u8, scale_theta u8, scale_gamma u8, channels u8,
/// Q f32, geometry length u32 + payload, then basis_count x channels plane
/// blocks of [k-prefix u8, length u32, payload].
struct SlfBitstream {
  uint8_t version = 1;
  uint8_t depth = 0;
  uint32_t point_count = 0;
  BasisSpec spec;
  uint8_t channels = 3;
  float q_step = 1.0f;
  std::vector<uint8_t> geometry;
  std::vector<std::vector<uint8_t>> planes;  // index = basis * channels + channel

  size_t total_bytes() const;
  size_t geometry_bytes() const;
  size_t plane_bytes() const;  // all plane blocks including framing

  std::vector<uint8_t> serialize() const;
  static SlfBitstream parse(std::span<const uint8_t> bytes);
};

struct EncodeResult {
  SlfBitstream stream;
  VoxelCloud vox;
  /// The encoder's own reconstruction: dequantized planes pushed back
  /// through the inverse transform (what any decoder must reproduce).
  SlfCoefficients reconstructed;  // per voxel
};

/// Voxelizes, merges attributes, then per plane: RAHT, uniform quantization
/// and entropy coding. Q is snapped to f32 so encoder and decoder agree.
EncodeResult encode_stream(const PointCloud& cloud, const SlfCoefficients& coeffs,
                           double q_step, int depth);

struct DecodeResult {
  VoxelCloud vox;  // identity point_map
  SlfCoefficients coefficients;  // per voxel, quantized reconstruction
  double q_step = 0.0;
};

/// Bit-deterministic inverse: entropy decode, dequantize, inverse RAHT.
DecodeResult decode_stream(std::span<const uint8_t> bytes);

}  // namespace slf
