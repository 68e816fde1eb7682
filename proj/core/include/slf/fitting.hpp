// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <vector>

#include "slf/basis.hpp"
#include "slf/errors.hpp"
#include "slf/mapping.hpp"
#include "slf/point_cloud.hpp"

namespace slf {

/// Regularized least-squares configuration for the per-point view-map fit.
struct FitConfig {
  double lambda = 0.8;           ///< data-term ridge factor
  double beta = 1.3;             ///< spatial smoothing pull toward neighbors
  int max_iters = 10;            ///< smoothing iterations T (0 = ridge only)
  int neighbor_count = 8;        ///< k nearest points feeding the average
  double convergence_tol = 1e-4; ///< early exit on max relative change

  void validate() const;
};

/// Per-point, per-channel basis coefficient vectors. channels[c] is a
/// point_count x basis_count matrix.
struct SlfCoefficients {
  BasisSpec spec;
  std::vector<Eigen::MatrixXd> channels;

  int point_count() const {
    return channels.empty() ? 0 : static_cast<int>(channels.front().rows());
  }
  int channel_count() const { return static_cast<int>(channels.size()); }
  int basis_count() const { return spec.count(); }

  void validate() const;
};

/// Ridge solution (G^T G + lambda I)^-1 G^T c via an LDLT factorization.
/// Throws NumericalError when lambda is 0 and the normal matrix is singular.
Eigen::VectorXd fit_ridge(const Eigen::VectorXd& c, const Eigen::MatrixXd& g,
                          double lambda);

/// Spatially smoothed solution
/// (G^T G + (lambda+beta) I)^-1 (G^T c + beta * alpha_bar).
Eigen::VectorXd fit_smoothed(const Eigen::VectorXd& c, const Eigen::MatrixXd& g,
                             double lambda, double beta,
                             const Eigen::VectorXd& alpha_bar);

/// Unweighted mean of the coefficient rows of the k points nearest to
/// point_index (itself excluded; distance ties break to the lower index).
/// `plane` is a point_count x basis_count matrix for one channel.
Eigen::VectorXd neighbor_average(const PointCloud& cloud, const Eigen::MatrixXd& plane,
                                 int point_index, int k);

struct IterationStat {
  double objective_before = 0.0;  // frozen-alpha_bar objective at the previous iterate
  double objective_after = 0.0;   // same objective at the new iterate
  double max_rel_change = 0.0;
};

struct SolveResult {
  SlfCoefficients coefficients;
  std::vector<IterationStat> iterations;
};

/// Ridge initialization followed by max_iters Jacobi sweeps of the smoothed
/// solve: every alpha_bar in sweep k reads only sweep k-1 coefficients, so
/// the result is independent of point processing order. RGB channels share
/// each point's factorization and are solved independently.
SolveResult solve_slf(const ObservationSet& obs, const PointCloud& cloud,
                      const BasisSpec& spec, const FitConfig& cfg, int threads = 0);

}  // namespace slf
