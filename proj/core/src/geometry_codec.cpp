// SPDX-License-Identifier: Apache-2.0
#include "slf/geometry_codec.hpp"

#include <deque>

namespace slf {

std::vector<uint8_t> encode_geometry(const VoxelCloud& vox) {
  if (vox.voxel_count() == 0) throw InvalidArgument("encode_geometry: empty voxel cloud");
  std::vector<uint64_t> codes = vox.codes();
  std::vector<uint8_t> out;

  struct Range {
    size_t begin, end;  // span of codes under one node
    int level;          // 0 = root
  };
  std::deque<Range> queue;
  queue.push_back({0, codes.size(), 0});
  while (!queue.empty()) {
    Range r = queue.front();
    queue.pop_front();
    if (r.level == vox.depth) continue;  // leaf: coordinates fully determined
    int shift = 3 * (vox.depth - 1 - r.level);
    uint8_t mask = 0;
    size_t pos = r.begin;
    std::array<std::pair<size_t, size_t>, 8> child{};
    for (int c = 0; c < 8; ++c) {
      size_t start = pos;
      while (pos < r.end &&
             static_cast<int>((codes[pos] >> shift) & 7u) == c)
        ++pos;
      if (pos > start) {
        mask |= static_cast<uint8_t>(1u << c);
        child[static_cast<size_t>(c)] = {start, pos};
      }
    }
    out.push_back(mask);
    for (int c = 0; c < 8; ++c)
      if (mask & (1u << c))
        queue.push_back({child[static_cast<size_t>(c)].first,
                         child[static_cast<size_t>(c)].second, r.level + 1});
  }
  return out;
}

std::vector<std::array<uint32_t, 3>> decode_geometry(std::span<const uint8_t> bytes,
                                                     int depth) {
  if (depth < 1 || depth > 21) throw CorruptStream("geometry depth out of range");
  std::vector<std::array<uint32_t, 3>> coords;
  struct Node {
    uint64_t prefix;
    int level;
  };
  std::deque<Node> queue;
  queue.push_back({0, 0});
  size_t pos = 0;
  while (!queue.empty()) {
    Node n = queue.front();
    queue.pop_front();
    if (n.level == depth) {
      coords.push_back(morton_decode(n.prefix, depth));
      continue;
    }
    if (pos >= bytes.size()) throw CorruptStream("geometry stream truncated");
    uint8_t mask = bytes[pos++];
    if (mask == 0) throw CorruptStream("geometry node with no children");
    for (int c = 0; c < 8; ++c)
      if (mask & (1u << c))
        queue.push_back({(n.prefix << 3) | static_cast<uint64_t>(c), n.level + 1});
  }
  if (pos != bytes.size()) throw CorruptStream("geometry stream has trailing bytes");
  return coords;
}

}  // namespace slf
