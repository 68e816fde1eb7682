// SPDX-License-Identifier: Apache-2.0
#include "slf/fitting.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

#include "slf/kdtree.hpp"
#include "slf/parallel.hpp"

namespace slf {
namespace {

// LDLT solve of (G^T G + ridge I) x = rhs with a singularity gate: when the
// ridge is exactly zero the pivots must stay clear of zero.
Eigen::VectorXd solve_normal_system(const Eigen::MatrixXd& g, double ridge,
                                    const Eigen::VectorXd& rhs) {
  Eigen::Index n = g.cols();
  Eigen::MatrixXd a = g.transpose() * g;
  a.diagonal().array() += ridge;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  if (ldlt.info() != Eigen::Success)
    throw NumericalError("normal-equation factorization failed");
  if (ridge == 0.0) {
    Eigen::VectorXd d = ldlt.vectorD();
    double dmax = d.cwiseAbs().maxCoeff();
    double dmin = d.minCoeff();
    if (!(dmax > 0.0) || dmin <= dmax * 1e-12 * static_cast<double>(n))
      throw NumericalError("normal equations singular with zero regularization");
  }
  Eigen::VectorXd x = ldlt.solve(rhs);
  if (!x.allFinite()) throw NumericalError("normal-equation solve produced non-finite values");
  return x;
}

}  // namespace

void FitConfig::validate() const {
  if (lambda < 0.0 || beta < 0.0)
    throw InvalidArgument("fit config: lambda and beta must be >= 0");
  if (max_iters < 0) throw InvalidArgument("fit config: max_iters must be >= 0");
  if (neighbor_count < 1) throw InvalidArgument("fit config: neighbor_count must be >= 1");
  if (!(convergence_tol > 0.0))
    throw InvalidArgument("fit config: convergence_tol must be > 0");
}

void SlfCoefficients::validate() const {
  for (const auto& m : channels) {
    if (m.cols() != spec.count())
      throw InvalidArgument("coefficients: basis length mismatch");
    if (m.rows() != channels.front().rows())
      throw InvalidArgument("coefficients: channel row mismatch");
    if (!m.allFinite()) throw InvalidArgument("coefficients: non-finite entries");
  }
}

Eigen::VectorXd fit_ridge(const Eigen::VectorXd& c, const Eigen::MatrixXd& g,
                          double lambda) {
  if (lambda < 0.0) throw InvalidArgument("fit_ridge: lambda must be >= 0");
  if (c.size() != g.rows()) throw InvalidArgument("fit_ridge: c/G size mismatch");
  return solve_normal_system(g, lambda, g.transpose() * c);
}

Eigen::VectorXd fit_smoothed(const Eigen::VectorXd& c, const Eigen::MatrixXd& g,
                             double lambda, double beta,
                             const Eigen::VectorXd& alpha_bar) {
  if (lambda < 0.0 || beta < 0.0)
    throw InvalidArgument("fit_smoothed: lambda and beta must be >= 0");
  if (c.size() != g.rows()) throw InvalidArgument("fit_smoothed: c/G size mismatch");
  if (alpha_bar.size() != g.cols())
    throw InvalidArgument("fit_smoothed: alpha_bar length mismatch");
  return solve_normal_system(g, lambda + beta, g.transpose() * c + beta * alpha_bar);
}

Eigen::VectorXd neighbor_average(const PointCloud& cloud, const Eigen::MatrixXd& plane,
                                 int point_index, int k) {
  int n = cloud.size();
  if (k < 1) throw InvalidArgument("neighbor_average: k must be >= 1");
  if (k >= n) throw InvalidArgument("neighbor_average: k must be below point count");
  if (point_index < 0 || point_index >= n)
    throw InvalidArgument("neighbor_average: point index out of range");
  if (plane.rows() != n) throw InvalidArgument("neighbor_average: plane row mismatch");
  KdTree tree(cloud.positions);
  std::vector<int> nb =
      tree.knn(cloud.positions[static_cast<size_t>(point_index)], k, point_index);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(plane.cols());
  for (int j : nb) mean += plane.row(j).transpose();
  return mean / static_cast<double>(nb.size());
}

SolveResult solve_slf(const ObservationSet& obs, const PointCloud& cloud,
                      const BasisSpec& spec, const FitConfig& cfg, int threads) {
  spec.validate(false);
  cfg.validate();
  int n_pts = cloud.size();
  if (obs.point_count() != n_pts)
    throw InvalidArgument("solve_slf: observation/point count mismatch");
  int n_basis = spec.count();
  constexpr int kChannels = 3;

  BasisEvaluator eval(spec);

  // Per-point observation matrices are rebuilt on demand to keep memory flat.
  auto build_g = [&](int pi, Eigen::MatrixXd& g, Eigen::Matrix<double, Eigen::Dynamic, 3>& c) {
    const auto& list = obs.per_point[static_cast<size_t>(pi)];
    g.resize(static_cast<Eigen::Index>(list.size()), n_basis);
    c.resize(static_cast<Eigen::Index>(list.size()), 3);
    Eigen::VectorXd row;
    for (size_t m = 0; m < list.size(); ++m) {
      eval.row_into(list[m].direction, row);
      g.row(static_cast<Eigen::Index>(m)) = row;
      c.row(static_cast<Eigen::Index>(m)) = list[m].color.transpose();
    }
  };

  SolveResult result;
  result.coefficients.spec = spec;
  result.coefficients.channels.assign(
      kChannels, Eigen::MatrixXd::Zero(n_pts, n_basis));

  std::vector<std::string> failures(static_cast<size_t>(n_pts));

  // Initialization: alpha^0 by the plain ridge fit.
  parallel_for(0, n_pts, threads, [&](int pi) {
    try {
      Eigen::MatrixXd g;
      Eigen::Matrix<double, Eigen::Dynamic, 3> c;
      build_g(pi, g, c);
      for (int ch = 0; ch < kChannels; ++ch)
        result.coefficients.channels[static_cast<size_t>(ch)].row(pi) =
            fit_ridge(c.col(ch), g, cfg.lambda).transpose();
    } catch (const Error& e) {
      failures[static_cast<size_t>(pi)] = e.what();
    }
  });
  for (int pi = 0; pi < n_pts; ++pi)
    if (!failures[static_cast<size_t>(pi)].empty())
      throw NumericalError("solve_slf: point " + std::to_string(pi) + ": " +
                           failures[static_cast<size_t>(pi)]);

  if (cfg.max_iters == 0 || n_pts == 0) return result;

  // Fixed neighbor lists; k is capped so single-point clouds degrade to a
  // zero neighbor average rather than erroring.
  int k_eff = std::min(cfg.neighbor_count, n_pts - 1);
  std::vector<std::vector<int>> neighbors(static_cast<size_t>(n_pts));
  if (k_eff > 0) {
    KdTree tree(cloud.positions);
    parallel_for(0, n_pts, threads, [&](int pi) {
      neighbors[static_cast<size_t>(pi)] =
          tree.knn(cloud.positions[static_cast<size_t>(pi)], k_eff, pi);
    });
  }

  std::vector<Eigen::MatrixXd> prev = result.coefficients.channels;
  std::vector<double> obj_before(static_cast<size_t>(n_pts));
  std::vector<double> obj_after(static_cast<size_t>(n_pts));
  std::vector<double> rel_change(static_cast<size_t>(n_pts));

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    prev = result.coefficients.channels;
    parallel_for(0, n_pts, threads, [&](int pi) {
      try {
        Eigen::MatrixXd g;
        Eigen::Matrix<double, Eigen::Dynamic, 3> c;
        build_g(pi, g, c);
        Eigen::MatrixXd a = g.transpose() * g;
        a.diagonal().array() += cfg.lambda + cfg.beta;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
        if (ldlt.info() != Eigen::Success)
          throw NumericalError("factorization failed");

        double before = 0.0, after = 0.0, change = 0.0;
        for (int ch = 0; ch < kChannels; ++ch) {
          Eigen::VectorXd abar = Eigen::VectorXd::Zero(n_basis);
          const auto& nb = neighbors[static_cast<size_t>(pi)];
          for (int j : nb) abar += prev[static_cast<size_t>(ch)].row(j).transpose();
          if (!nb.empty()) abar /= static_cast<double>(nb.size());

          Eigen::VectorXd a_prev = prev[static_cast<size_t>(ch)].row(pi).transpose();
          Eigen::VectorXd a_new =
              ldlt.solve(g.transpose() * c.col(ch) + cfg.beta * abar);
          if (!a_new.allFinite()) throw NumericalError("non-finite solution");

          before += (c.col(ch) - g * a_prev).squaredNorm() +
                    cfg.lambda * a_prev.squaredNorm() +
                    cfg.beta * (a_prev - abar).squaredNorm();
          after += (c.col(ch) - g * a_new).squaredNorm() +
                   cfg.lambda * a_new.squaredNorm() +
                   cfg.beta * (a_new - abar).squaredNorm();
          double base = std::max(a_prev.norm(), 1e-12);
          change = std::max(change, (a_new - a_prev).norm() / base);

          result.coefficients.channels[static_cast<size_t>(ch)].row(pi) =
              a_new.transpose();
        }
        obj_before[static_cast<size_t>(pi)] = before;
        obj_after[static_cast<size_t>(pi)] = after;
        rel_change[static_cast<size_t>(pi)] = change;
      } catch (const Error& e) {
        failures[static_cast<size_t>(pi)] = e.what();
      }
    });
    for (int pi = 0; pi < n_pts; ++pi)
      if (!failures[static_cast<size_t>(pi)].empty())
        throw NumericalError("solve_slf: point " + std::to_string(pi) + ": " +
                             failures[static_cast<size_t>(pi)]);

    IterationStat stat;
    for (int pi = 0; pi < n_pts; ++pi) {
      stat.objective_before += obj_before[static_cast<size_t>(pi)];
      stat.objective_after += obj_after[static_cast<size_t>(pi)];
      stat.max_rel_change = std::max(stat.max_rel_change, rel_change[static_cast<size_t>(pi)]);
    }
    result.iterations.push_back(stat);
    if (stat.max_rel_change < cfg.convergence_tol) break;
  }
  return result;
}

}  // namespace slf
