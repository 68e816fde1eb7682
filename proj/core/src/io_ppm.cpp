// SPDX-License-Identifier: Apache-2.0
#include <fstream>

#include "slf/io.hpp"

namespace slf {
namespace {

// Next whitespace-delimited token, skipping '#' comments to end of line.
std::string ppm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

}  // namespace

Image read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  if (ppm_token(in) != "P6") throw IoError("ppm: not a binary P6 file: " + path);
  Image img;
  try {
    img.width = std::stoi(ppm_token(in));
    img.height = std::stoi(ppm_token(in));
    int maxval = std::stoi(ppm_token(in));
    if (maxval != 255) throw IoError("ppm: only maxval 255 supported");
  } catch (const std::logic_error&) {
    throw IoError("ppm: malformed header in " + path);
  }
  if (img.width < 1 || img.height < 1) throw IoError("ppm: bad dimensions");
  img.pixels.resize(static_cast<size_t>(img.width) * img.height * 3);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
    throw IoError("ppm: truncated pixel data in " + path);
  return img;
}

void write_ppm(const std::string& path, const Image& image) {
  if (image.width < 1 || image.height < 1 ||
      image.pixels.size() != static_cast<size_t>(image.width) * image.height * 3)
    throw InvalidArgument("write_ppm: malformed image");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace slf
