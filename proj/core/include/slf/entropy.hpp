// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "slf/errors.hpp"

namespace slf {

/// Signed-to-unsigned zigzag: 0,-1,1,-2,2,... -> 0,1,2,3,4,...
uint64_t zigzag_encode(int64_t v);
int64_t zigzag_decode(uint64_t u);

/// Quantizer level, rounding halfway cases away from zero. Q must be > 0.
int64_t quantize(double value, double q_step);
double dequantize(int64_t level, double q_step);

/// Exp-Golomb code length in bits of nonnegative u at order k.
int exp_golomb_bits(uint64_t u, int k);

/// Encodes levels with zigzag + order-k Exp-Golomb, MSB-first, final byte
/// zero padded. k in [0, 31] is chosen to minimize total bits and stored in
/// a one-byte prefix. Decoding is bit exact.
std::vector<uint8_t> entropy_encode(std::span<const int64_t> levels);
std::vector<int64_t> entropy_decode(std::span<const uint8_t> bytes, size_t count);

}  // namespace slf
