// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <fstream>
#include <sstream>

#include "slf/io.hpp"

namespace slf {

CameraRig read_rig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  CameraRig rig;
  std::vector<std::pair<int, CameraModel>> entries;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first[0] == '#') {
      // Layout metadata may ride in comments.
      std::string word = first.substr(1);
      do {
        auto eq = word.find('=');
        if (eq != std::string::npos) {
          std::string key = word.substr(0, eq);
          std::string val = word.substr(eq + 1);
          try {
            if (key == "circles") rig.circles = std::stoi(val);
            if (key == "per-circle") rig.per_circle = std::stoi(val);
          } catch (const std::logic_error&) {
            throw IoError("rig: bad layout comment at line " + std::to_string(line_no));
          }
        }
      } while (ls >> word);
      continue;
    }
    std::istringstream row(line);
    int id;
    if (!(row >> id)) throw IoError("rig: bad camera id at line " + std::to_string(line_no));
    CameraModel cam;
    double vals[21];
    for (double& v : vals)
      if (!(row >> v))
        throw IoError("rig: camera line " + std::to_string(line_no) + " needs 24 fields");
    int wh[2];
    for (int& v : wh)
      if (!(row >> v))
        throw IoError("rig: camera line " + std::to_string(line_no) + " needs 24 fields");
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        cam.intrinsics(r, c) = vals[3 * r + c];
        cam.rotation(r, c) = vals[9 + 3 * r + c];
      }
    cam.translation = Eigen::Vector3d(vals[18], vals[19], vals[20]);
    cam.width = wh[0];
    cam.height = wh[1];
    cam.validate();
    entries.emplace_back(id, cam);
  }
  if (entries.empty()) throw IoError("rig: no cameras in " + path);
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].first != static_cast<int>(i))
      throw IoError("rig: camera ids must be contiguous from 0");
    rig.cameras.push_back(entries[i].second);
  }
  return rig;
}

void write_rig(const std::string& path, const CameraRig& rig) {
  std::ostringstream out;
  out << "# slf camera rig: id, K row-major (9), R row-major (9), t (3), width, height\n";
  if (rig.circles > 0 && rig.per_circle > 0)
    out << "# circles=" << rig.circles << " per-circle=" << rig.per_circle << "\n";
  out.precision(17);
  for (size_t i = 0; i < rig.cameras.size(); ++i) {
    const CameraModel& cam = rig.cameras[i];
    out << i;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) out << ' ' << cam.intrinsics(r, c);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) out << ' ' << cam.rotation(r, c);
    for (int r = 0; r < 3; ++r) out << ' ' << cam.translation[r];
    out << ' ' << cam.width << ' ' << cam.height << '\n';
  }
  write_file_atomic(path, out.str());
}

}  // namespace slf
