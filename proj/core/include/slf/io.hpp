// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "slf/camera.hpp"
#include "slf/errors.hpp"
#include "slf/fitting.hpp"
#include "slf/mapping.hpp"
#include "slf/point_cloud.hpp"

namespace slf {

// --- PLY point clouds (ascii and binary little-endian) ---------------------

/// Reads x, y, z and, when present, nx, ny, nz from the vertex element.
/// Other properties and elements are skipped.
PointCloud read_ply(const std::string& path);

/// Writes double-precision x, y, z (+ normals when the cloud has them).
void write_ply(const std::string& path, const PointCloud& cloud, bool binary = true);

// --- PPM images (binary P6, maxval 255) -------------------------------------

Image read_ppm(const std::string& path);
void write_ppm(const std::string& path, const Image& image);

// --- Camera rigs -------------------------------------------------------------

/// Text rig file: '#' comment lines, then one camera per line as
/// id, 9 intrinsics (row-major), 9 rotation (row-major), 3 translation,
/// width, height. A `# circles=C per-circle=P` comment carries the rig
/// layout; 0 means unknown.
struct CameraRig {
  std::vector<CameraModel> cameras;  // sorted by id; ids must be 0..n-1
  int circles = 0;
  int per_circle = 0;
};

CameraRig read_rig(const std::string& path);
void write_rig(const std::string& path, const CameraRig& rig);

// --- Coefficient dumps -------------------------------------------------------

/// Line-oriented text: a header comment with the basis shape, then one
/// record per (point, channel): point index, channel, basis_count reals.
void write_coefficients(const std::string& path, const SlfCoefficients& coeffs);
SlfCoefficients read_coefficients(const std::string& path);

// --- Small helpers -----------------------------------------------------------

/// Writes via a temporary file and renames into place, so a failed write
/// never leaves a partial file at `path`.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace slf
