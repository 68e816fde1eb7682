// SPDX-License-Identifier: Apache-2.0
#include "slf/bitstream.hpp"

#include <cstring>
#include <numeric>

#include "slf/entropy.hpp"
#include "slf/geometry_codec.hpp"
#include "slf/raht.hpp"

namespace slf {
namespace {

constexpr char kMagic[4] = {'S', 'L', 'F', '1'};

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 24));
}

void put_f32(std::vector<uint8_t>& out, float v) {
  uint32_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  put_u32(out, bits);
}

class Cursor {
 public:
  explicit Cursor(std::span<const uint8_t> data) : data_(data) {}
  uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  uint32_t u32() {
    need(4);
    uint32_t v = data_[pos_] | (data_[pos_ + 1] << 8) | (data_[pos_ + 2] << 16) |
                 (static_cast<uint32_t>(data_[pos_ + 3]) << 24);
    pos_ += 4;
    return v;
  }
  float f32() {
    uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  std::vector<uint8_t> bytes(size_t n) {
    need(n);
    std::vector<uint8_t> v(data_.begin() + static_cast<long>(pos_),
                           data_.begin() + static_cast<long>(pos_ + n));
    pos_ += n;
    return v;
  }
  size_t remaining() const { return data_.size() - pos_; }

 private:
  void need(size_t n) const {
    if (pos_ + n > data_.size()) throw CorruptStream("stream truncated");
  }
  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

}  // namespace

size_t SlfBitstream::geometry_bytes() const { return 4 + geometry.size(); }

size_t SlfBitstream::plane_bytes() const {
  size_t total = 0;
  for (const auto& p : planes) total += 5 + (p.empty() ? 0 : p.size() - 1);
  return total;
}

size_t SlfBitstream::total_bytes() const {
  return 4 + 1 + 1 + 4 + 4 + 4 + geometry_bytes() + plane_bytes();
}

std::vector<uint8_t> SlfBitstream::serialize() const {
  std::vector<uint8_t> out;
  out.reserve(total_bytes());
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(version);
  out.push_back(depth);
  put_u32(out, point_count);
  out.push_back(static_cast<uint8_t>(spec.order));
  out.push_back(static_cast<uint8_t>(spec.scale_theta));
  out.push_back(static_cast<uint8_t>(spec.scale_gamma));
  out.push_back(channels);
  put_f32(out, q_step);
  put_u32(out, static_cast<uint32_t>(geometry.size()));
  out.insert(out.end(), geometry.begin(), geometry.end());
  for (const auto& plane : planes) {
    // entropy_encode output = [k, payload...]; the block splits it as
    // k-prefix u8, payload length u32, payload.
    if (plane.empty()) throw InvalidArgument("bitstream: empty plane block");
    out.push_back(plane.front());
    put_u32(out, static_cast<uint32_t>(plane.size() - 1));
    out.insert(out.end(), plane.begin() + 1, plane.end());
  }
  return out;
}

SlfBitstream SlfBitstream::parse(std::span<const uint8_t> bytes) {
  Cursor cur(bytes);
  std::vector<uint8_t> magic = cur.bytes(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0)
    throw UnsupportedStream("bad magic, not an SLF stream");
  SlfBitstream s;
  s.version = cur.u8();
  if (s.version != 1) throw UnsupportedStream("unsupported stream version");
  s.depth = cur.u8();
  s.point_count = cur.u32();
  s.spec.order = cur.u8();
  s.spec.scale_theta = cur.u8();
  s.spec.scale_gamma = cur.u8();
  s.channels = cur.u8();
  s.q_step = cur.f32();
  s.spec.validate(false);
  if (!(s.q_step > 0.0f)) throw CorruptStream("nonpositive quantization step");
  uint32_t geom_len = cur.u32();
  s.geometry = cur.bytes(geom_len);
  size_t n_planes = static_cast<size_t>(s.spec.count()) * s.channels;
  s.planes.reserve(n_planes);
  for (size_t i = 0; i < n_planes; ++i) {
    uint8_t k = cur.u8();
    uint32_t len = cur.u32();
    std::vector<uint8_t> block;
    block.reserve(len + 1);
    block.push_back(k);
    std::vector<uint8_t> payload = cur.bytes(len);
    block.insert(block.end(), payload.begin(), payload.end());
    s.planes.push_back(std::move(block));
  }
  if (cur.remaining() != 0) throw CorruptStream("trailing bytes after plane blocks");
  return s;
}

EncodeResult encode_stream(const PointCloud& cloud, const SlfCoefficients& coeffs,
                           double q_step, int depth) {
  coeffs.validate();
  if (coeffs.point_count() != cloud.size())
    throw InvalidArgument("encode_stream: coefficients missing for some points");
  if (!(q_step > 0.0)) throw InvalidArgument("encode_stream: Q must be > 0");

  EncodeResult res;
  res.vox = voxelize(cloud, depth);
  // Snap Q to its stored f32 so the encoder-side reconstruction is exactly
  // what a decoder computes.
  float qf = static_cast<float>(q_step);
  double q = static_cast<double>(qf);
  if (!(q > 0.0)) throw InvalidArgument("encode_stream: Q underflows f32");

  int n_basis = coeffs.basis_count();
  int n_channels = coeffs.channel_count();
  int n_vox = res.vox.voxel_count();

  std::vector<Eigen::MatrixXd> per_voxel(static_cast<size_t>(n_channels));
  for (int ch = 0; ch < n_channels; ++ch)
    per_voxel[static_cast<size_t>(ch)] =
        average_attributes(res.vox, coeffs.channels[static_cast<size_t>(ch)]);

  RahtPlan plan = RahtPlan::build(res.vox);

  res.stream.depth = static_cast<uint8_t>(depth);
  res.stream.point_count = static_cast<uint32_t>(n_vox);
  res.stream.spec = coeffs.spec;
  res.stream.channels = static_cast<uint8_t>(n_channels);
  res.stream.q_step = qf;
  res.stream.geometry = encode_geometry(res.vox);
  res.stream.planes.reserve(static_cast<size_t>(n_basis) * n_channels);

  res.reconstructed.spec = coeffs.spec;
  res.reconstructed.channels.assign(static_cast<size_t>(n_channels),
                                    Eigen::MatrixXd::Zero(n_vox, n_basis));

  std::vector<double> plane(static_cast<size_t>(n_vox));
  std::vector<int64_t> levels(static_cast<size_t>(n_vox));
  std::vector<double> deq(static_cast<size_t>(n_vox));
  for (int i = 0; i < n_basis; ++i) {
    for (int ch = 0; ch < n_channels; ++ch) {
      for (int v = 0; v < n_vox; ++v)
        plane[static_cast<size_t>(v)] = per_voxel[static_cast<size_t>(ch)](v, i);
      std::vector<double> f = raht_forward(plan, plane);
      for (int v = 0; v < n_vox; ++v)
        levels[static_cast<size_t>(v)] = quantize(f[static_cast<size_t>(v)], q);
      res.stream.planes.push_back(entropy_encode(levels));
      for (int v = 0; v < n_vox; ++v)
        deq[static_cast<size_t>(v)] = dequantize(levels[static_cast<size_t>(v)], q);
      std::vector<double> rec = raht_inverse(plan, deq);
      for (int v = 0; v < n_vox; ++v)
        res.reconstructed.channels[static_cast<size_t>(ch)](v, i) =
            rec[static_cast<size_t>(v)];
    }
  }
  return res;
}

DecodeResult decode_stream(std::span<const uint8_t> bytes) {
  SlfBitstream s = SlfBitstream::parse(bytes);
  DecodeResult res;
  res.vox.depth = s.depth;
  res.vox.coords = decode_geometry(s.geometry, s.depth);
  if (res.vox.coords.size() != s.point_count)
    throw CorruptStream("geometry voxel count disagrees with header");
  res.vox.point_map.resize(res.vox.coords.size());
  std::iota(res.vox.point_map.begin(), res.vox.point_map.end(), 0);

  double q = static_cast<double>(s.q_step);
  res.q_step = q;
  int n_vox = res.vox.voxel_count();
  int n_basis = s.spec.count();
  int n_channels = s.channels;

  RahtPlan plan = RahtPlan::build(res.vox);

  res.coefficients.spec = s.spec;
  res.coefficients.channels.assign(static_cast<size_t>(n_channels),
                                   Eigen::MatrixXd::Zero(n_vox, n_basis));
  std::vector<double> deq(static_cast<size_t>(n_vox));
  for (int i = 0; i < n_basis; ++i) {
    for (int ch = 0; ch < n_channels; ++ch) {
      const auto& block = s.planes[static_cast<size_t>(i) * n_channels +
                                   static_cast<size_t>(ch)];
      std::vector<int64_t> levels = entropy_decode(block, static_cast<size_t>(n_vox));
      for (int v = 0; v < n_vox; ++v)
        deq[static_cast<size_t>(v)] = dequantize(levels[static_cast<size_t>(v)], q);
      std::vector<double> rec = raht_inverse(plan, deq);
      for (int v = 0; v < n_vox; ++v)
        res.coefficients.channels[static_cast<size_t>(ch)](v, i) =
            rec[static_cast<size_t>(v)];
    }
  }
  return res;
}

}  // namespace slf
