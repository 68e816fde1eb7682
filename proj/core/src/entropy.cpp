// SPDX-License-Identifier: Apache-2.0
#include "slf/entropy.hpp"

#include <bit>
#include <cmath>
#include <limits>

namespace slf {
namespace {

int bit_length(uint64_t v) { return 64 - std::countl_zero(v); }  // v >= 1

class BitWriter {
 public:
  void put(uint64_t bits, int count) {
    for (int i = count - 1; i >= 0; --i) {
      cur_ = static_cast<uint8_t>((cur_ << 1) | ((bits >> i) & 1u));
      if (++fill_ == 8) {
        out_.push_back(cur_);
        cur_ = 0;
        fill_ = 0;
      }
    }
  }
  std::vector<uint8_t> finish() {
    if (fill_ > 0) {
      out_.push_back(static_cast<uint8_t>(cur_ << (8 - fill_)));
      cur_ = 0;
      fill_ = 0;
    }
    return std::move(out_);
  }

 private:
  std::vector<uint8_t> out_;
  uint8_t cur_ = 0;
  int fill_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const uint8_t> data) : data_(data) {}
  int next() {
    if (pos_ >= data_.size() * 8) return -1;
    int bit = (data_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1;
    ++pos_;
    return bit;
  }

 private:
  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

}  // namespace

uint64_t zigzag_encode(int64_t v) {
  return (static_cast<uint64_t>(v) << 1) ^ static_cast<uint64_t>(v >> 63);
}

int64_t zigzag_decode(uint64_t u) {
  return static_cast<int64_t>(u >> 1) ^ -static_cast<int64_t>(u & 1);
}

int64_t quantize(double value, double q_step) {
  if (!(q_step > 0.0)) throw InvalidArgument("quantize: step must be > 0");
  return std::llround(value / q_step);
}

double dequantize(int64_t level, double q_step) {
  if (!(q_step > 0.0)) throw InvalidArgument("dequantize: step must be > 0");
  return static_cast<double>(level) * q_step;
}

int exp_golomb_bits(uint64_t u, int k) {
  uint64_t v = u + (uint64_t{1} << k);
  return 2 * (bit_length(v) - 1) - k + 1;
}

std::vector<uint8_t> entropy_encode(std::span<const int64_t> levels) {
  // Pick the order minimizing total bits; ties go to the smaller k.
  int best_k = 0;
  uint64_t best_bits = std::numeric_limits<uint64_t>::max();
  for (int k = 0; k < 32; ++k) {
    uint64_t total = 0;
    for (int64_t lvl : levels) total += static_cast<uint64_t>(exp_golomb_bits(zigzag_encode(lvl), k));
    if (total < best_bits) {
      best_bits = total;
      best_k = k;
    }
  }

  BitWriter writer;
  for (int64_t lvl : levels) {
    uint64_t v = zigzag_encode(lvl) + (uint64_t{1} << best_k);
    int nb = bit_length(v);
    writer.put(0, nb - 1 - best_k);  // unary zero prefix
    writer.put(v, nb);               // leading 1 plus payload
  }
  std::vector<uint8_t> payload = writer.finish();
  std::vector<uint8_t> out;
  out.reserve(payload.size() + 1);
  out.push_back(static_cast<uint8_t>(best_k));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

std::vector<int64_t> entropy_decode(std::span<const uint8_t> bytes, size_t count) {
  if (bytes.empty()) {
    if (count == 0) return {};
    throw CorruptStream("entropy stream missing order prefix");
  }
  int k = bytes[0];
  if (k > 31) throw CorruptStream("entropy order prefix out of range");
  BitReader reader(bytes.subspan(1));
  std::vector<int64_t> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    int zeros = 0;
    int bit = reader.next();
    while (bit == 0) {
      if (++zeros + k >= 64) throw CorruptStream("entropy prefix overlong");
      bit = reader.next();
    }
    if (bit < 0) throw CorruptStream("entropy stream truncated");
    uint64_t v = 1;
    for (int j = 0; j < zeros + k; ++j) {
      bit = reader.next();
      if (bit < 0) throw CorruptStream("entropy stream truncated");
      v = (v << 1) | static_cast<uint64_t>(bit);
    }
    out.push_back(zigzag_decode(v - (uint64_t{1} << k)));
  }
  return out;
}

}  // namespace slf
