// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <vector>

#include "slf/errors.hpp"

namespace slf {

/// Direction of a ray leaving a surface point, parameterized so that equal
/// areas in the (theta, gamma) plane are equal areas on the sphere.
struct DirectionParam {
  double theta = 0.0;  ///< azimuth in [-pi, pi]
  double gamma = 0.0;  ///< sin(elevation), in [-1, 1]
};

/// Shape of the separable 2D wavelet basis over direction space. The basis
/// has 2^scale_theta members along theta and 2^scale_gamma along gamma, for
/// count() members total.
struct BasisSpec {
  int order = 2;        ///< 1=constant (Haar), 2=linear, 3=quadratic, 4=cubic
  int scale_theta = 4;  ///< s0
  int scale_gamma = 3;  ///< s1

  int count() const { return 1 << (scale_theta + scale_gamma); }

  /// Throws InvalidArgument on bad ranges. By default also enforces the
  /// s0 = s1 + 1 resolution link; pass false to allow any scale pair
  /// (needed e.g. for a single-coefficient DC-only basis).
  void validate(bool enforce_scale_link = true) const;
};

/// Cardinal B-spline N_o(x), support [0, order). N_1 is the indicator of
/// [0,1); higher orders follow the Cox-de Boor recursion.
double cardinal_bspline(int order, double x);

/// B-spline wavelet psi_o(x), a finite combination of cardinal B-splines at
/// double resolution. Support is [0, 2*order - 1]; integral is zero.
double mother_wavelet(int order, double x);

/// Member `index` of the period-1 multiresolution family of size 2^scale:
/// index 0 is the constant (DC) member; index in [2^t, 2^{t+1}) is the
/// periodicized wavelet at level t, offset index - 2^t, with no
/// renormalization: finer levels keep the mother wavelet's amplitude and so
/// carry L2 norms of |psi_o| / 2^{t/2} once the copies stop
/// self-overlapping. x is taken modulo 1.
double periodic_basis_1d(int order, int scale, int index, double x);

/// Separable 2D member g_i(theta, gamma); i decomposes theta-major as
/// i0 = i mod 2^s0, i1 = i div 2^s0.
double evaluate_basis_2d(const BasisSpec& spec, const DirectionParam& d, int i);

/// Caches the wavelet coefficients of one BasisSpec so whole rows can be
/// evaluated without touching shared state. Reentrant.
class BasisEvaluator {
 public:
  explicit BasisEvaluator(const BasisSpec& spec);

  const BasisSpec& spec() const { return spec_; }
  int count() const { return spec_.count(); }

  /// Row j of the observation matrix: all g_i at one direction.
  Eigen::VectorXd row(const DirectionParam& d) const;
  void row_into(const DirectionParam& d, Eigen::VectorXd& out) const;

 private:
  double eval_1d(int index, double x) const;

  BasisSpec spec_;
  std::vector<double> q_;  // wavelet combination coefficients for `order`
};

/// Observation matrix G: row j, column i equals g_i(directions[j]).
Eigen::MatrixXd basis_matrix(const BasisSpec& spec,
                             const std::vector<DirectionParam>& directions);

}  // namespace slf
