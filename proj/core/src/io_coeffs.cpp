// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <fstream>
#include <sstream>

#include "slf/io.hpp"

namespace slf {

void write_file_atomic(const std::string& path, const std::string& contents) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write " + tmp);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
      std::remove(tmp.c_str());
      throw IoError("write failed for " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw IoError("cannot move " + tmp + " into place");
  }
}

void write_coefficients(const std::string& path, const SlfCoefficients& coeffs) {
  coeffs.validate();
  std::ostringstream out;
  out << "# slf-coeffs points=" << coeffs.point_count()
      << " channels=" << coeffs.channel_count() << " n=" << coeffs.basis_count()
      << " order=" << coeffs.spec.order << " scale-theta=" << coeffs.spec.scale_theta
      << " scale-gamma=" << coeffs.spec.scale_gamma << "\n";
  out.precision(17);
  for (int pi = 0; pi < coeffs.point_count(); ++pi) {
    for (int ch = 0; ch < coeffs.channel_count(); ++ch) {
      out << pi << ' ' << ch;
      const auto& m = coeffs.channels[static_cast<size_t>(ch)];
      for (Eigen::Index i = 0; i < m.cols(); ++i) out << ' ' << m(pi, i);
      out << '\n';
    }
  }
  write_file_atomic(path, out.str());
}

SlfCoefficients read_coefficients(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("coeffs: empty file " + path);
  int points = -1, channels = -1, n = -1, order = -1, s0 = -1, s1 = -1;
  {
    std::istringstream ls(line);
    std::string word;
    while (ls >> word) {
      auto eq = word.find('=');
      if (eq == std::string::npos) continue;
      std::string key = word.substr(0, eq);
      int value = 0;
      try {
        value = std::stoi(word.substr(eq + 1));
      } catch (const std::logic_error&) {
        throw IoError("coeffs: malformed header in " + path);
      }
      if (key == "points") points = value;
      else if (key == "channels") channels = value;
      else if (key == "n") n = value;
      else if (key == "order") order = value;
      else if (key == "scale-theta") s0 = value;
      else if (key == "scale-gamma") s1 = value;
    }
  }
  if (points < 0 || channels < 1 || n < 1 || order < 1 || s0 < 0 || s1 < 0)
    throw IoError("coeffs: missing header fields in " + path);
  SlfCoefficients coeffs;
  coeffs.spec.order = order;
  coeffs.spec.scale_theta = s0;
  coeffs.spec.scale_gamma = s1;
  if (coeffs.spec.count() != n) throw IoError("coeffs: n disagrees with scales");
  coeffs.channels.assign(static_cast<size_t>(channels), Eigen::MatrixXd::Zero(points, n));

  size_t records = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int pi, ch;
    if (!(ls >> pi >> ch)) throw IoError("coeffs: malformed record in " + path);
    if (pi < 0 || pi >= points || ch < 0 || ch >= channels)
      throw IoError("coeffs: record index out of range in " + path);
    auto& m = coeffs.channels[static_cast<size_t>(ch)];
    for (int i = 0; i < n; ++i)
      if (!(ls >> m(pi, i))) throw IoError("coeffs: short record in " + path);
    ++records;
  }
  if (records != static_cast<size_t>(points) * static_cast<size_t>(channels))
    throw IoError("coeffs: record count mismatch in " + path);
  return coeffs;
}

}  // namespace slf
