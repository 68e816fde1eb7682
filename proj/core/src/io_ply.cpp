// SPDX-License-Identifier: Apache-2.0
#include <cstring>
#include <fstream>
#include <sstream>

#include "slf/io.hpp"

namespace slf {
namespace {

enum class PlyType { kChar, kUChar, kShort, kUShort, kInt, kUInt, kFloat, kDouble };

size_t ply_type_size(PlyType t) {
  switch (t) {
    case PlyType::kChar:
    case PlyType::kUChar: return 1;
    case PlyType::kShort:
    case PlyType::kUShort: return 2;
    case PlyType::kInt:
    case PlyType::kUInt:
    case PlyType::kFloat: return 4;
    case PlyType::kDouble: return 8;
  }
  return 0;
}

PlyType parse_ply_type(const std::string& name) {
  if (name == "char" || name == "int8") return PlyType::kChar;
  if (name == "uchar" || name == "uint8") return PlyType::kUChar;
  if (name == "short" || name == "int16") return PlyType::kShort;
  if (name == "ushort" || name == "uint16") return PlyType::kUShort;
  if (name == "int" || name == "int32") return PlyType::kInt;
  if (name == "uint" || name == "uint32") return PlyType::kUInt;
  if (name == "float" || name == "float32") return PlyType::kFloat;
  if (name == "double" || name == "float64") return PlyType::kDouble;
  throw IoError("ply: unknown property type " + name);
}

double read_binary_scalar(std::istream& in, PlyType t) {
  char buf[8];
  in.read(buf, static_cast<std::streamsize>(ply_type_size(t)));
  if (!in) throw IoError("ply: truncated binary payload");
  switch (t) {
    case PlyType::kChar: return static_cast<int8_t>(buf[0]);
    case PlyType::kUChar: return static_cast<uint8_t>(buf[0]);
    case PlyType::kShort: { int16_t v; std::memcpy(&v, buf, 2); return v; }
    case PlyType::kUShort: { uint16_t v; std::memcpy(&v, buf, 2); return v; }
    case PlyType::kInt: { int32_t v; std::memcpy(&v, buf, 4); return v; }
    case PlyType::kUInt: { uint32_t v; std::memcpy(&v, buf, 4); return v; }
    case PlyType::kFloat: { float v; std::memcpy(&v, buf, 4); return v; }
    case PlyType::kDouble: { double v; std::memcpy(&v, buf, 8); return v; }
  }
  return 0.0;
}

double read_ascii_scalar(std::istream& in) {
  double v;
  if (!(in >> v)) throw IoError("ply: truncated ascii payload");
  return v;
}

struct PlyProperty {
  std::string name;
  PlyType type = PlyType::kFloat;
  bool is_list = false;
  PlyType count_type = PlyType::kUChar;
};

struct PlyElement {
  std::string name;
  size_t count = 0;
  std::vector<PlyProperty> properties;
};

}  // namespace

PointCloud read_ply(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.substr(0, 3) != "ply")
    throw IoError("ply: missing magic line in " + path);

  bool binary = false;
  std::vector<PlyElement> elements;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "comment" || tok == "obj_info" || tok.empty()) continue;
    if (tok == "format") {
      std::string fmt;
      ls >> fmt;
      if (fmt == "ascii") binary = false;
      else if (fmt == "binary_little_endian") binary = true;
      else throw IoError("ply: unsupported format " + fmt);
    } else if (tok == "element") {
      PlyElement el;
      ls >> el.name >> el.count;
      elements.push_back(el);
    } else if (tok == "property") {
      if (elements.empty()) throw IoError("ply: property before element");
      PlyProperty prop;
      std::string type_name;
      ls >> type_name;
      if (type_name == "list") {
        std::string count_name, value_name;
        ls >> count_name >> value_name >> prop.name;
        prop.is_list = true;
        prop.count_type = parse_ply_type(count_name);
        prop.type = parse_ply_type(value_name);
      } else {
        ls >> prop.name;
        prop.type = parse_ply_type(type_name);
      }
      elements.back().properties.push_back(prop);
    } else if (tok == "end_header") {
      break;
    } else {
      throw IoError("ply: unexpected header token " + tok);
    }
  }

  PointCloud cloud;
  for (const PlyElement& el : elements) {
    bool is_vertex = (el.name == "vertex");
    int ix = -1, iy = -1, iz = -1, inx = -1, iny = -1, inz = -1;
    for (size_t i = 0; i < el.properties.size(); ++i) {
      const std::string& n = el.properties[i].name;
      int idx = static_cast<int>(i);
      if (n == "x") ix = idx;
      else if (n == "y") iy = idx;
      else if (n == "z") iz = idx;
      else if (n == "nx") inx = idx;
      else if (n == "ny") iny = idx;
      else if (n == "nz") inz = idx;
    }
    if (is_vertex && (ix < 0 || iy < 0 || iz < 0))
      throw IoError("ply: vertex element lacks x, y, z");
    bool has_normals = is_vertex && inx >= 0 && iny >= 0 && inz >= 0;

    std::vector<double> values(el.properties.size());
    for (size_t row = 0; row < el.count; ++row) {
      for (size_t i = 0; i < el.properties.size(); ++i) {
        const PlyProperty& prop = el.properties[i];
        if (prop.is_list) {
          double count = binary ? read_binary_scalar(in, prop.count_type)
                                : read_ascii_scalar(in);
          if (count < 0 || count > 1e9) throw IoError("ply: bad list count");
          for (long j = 0; j < static_cast<long>(count); ++j)
            binary ? read_binary_scalar(in, prop.type) : read_ascii_scalar(in);
          values[i] = 0.0;
        } else {
          values[i] = binary ? read_binary_scalar(in, prop.type) : read_ascii_scalar(in);
        }
      }
      if (is_vertex) {
        cloud.positions.emplace_back(values[static_cast<size_t>(ix)],
                                     values[static_cast<size_t>(iy)],
                                     values[static_cast<size_t>(iz)]);
        if (has_normals)
          cloud.normals.emplace_back(values[static_cast<size_t>(inx)],
                                     values[static_cast<size_t>(iny)],
                                     values[static_cast<size_t>(inz)]);
      }
    }
  }
  if (cloud.positions.empty()) throw IoError("ply: no vertex data in " + path);
  return cloud;
}

void write_ply(const std::string& path, const PointCloud& cloud, bool binary) {
  cloud.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "ply\n";
  out << (binary ? "format binary_little_endian 1.0\n" : "format ascii 1.0\n");
  out << "element vertex " << cloud.size() << "\n";
  out << "property double x\nproperty double y\nproperty double z\n";
  if (cloud.has_normals())
    out << "property double nx\nproperty double ny\nproperty double nz\n";
  out << "end_header\n";
  for (int i = 0; i < cloud.size(); ++i) {
    const Eigen::Vector3d& p = cloud.positions[static_cast<size_t>(i)];
    if (binary) {
      out.write(reinterpret_cast<const char*>(p.data()), 24);
      if (cloud.has_normals())
        out.write(reinterpret_cast<const char*>(cloud.normals[static_cast<size_t>(i)].data()), 24);
    } else {
      out.precision(17);
      out << p.x() << ' ' << p.y() << ' ' << p.z();
      if (cloud.has_normals()) {
        const Eigen::Vector3d& n = cloud.normals[static_cast<size_t>(i)];
        out << ' ' << n.x() << ' ' << n.y() << ' ' << n.z();
      }
      out << '\n';
    }
  }
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace slf
