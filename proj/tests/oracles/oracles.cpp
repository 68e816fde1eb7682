// SPDX-License-Identifier: Apache-2.0
#include "oracles.hpp"

#include <cmath>
#include <functional>

#include "slf/errors.hpp"

namespace slf::oracles {

OracleReport make_report(const std::string& name, double abs_err, double rel_err,
                         double abs_tol, double rel_tol) {
  OracleReport r;
  r.name = name;
  r.max_abs_error = abs_err;
  r.max_rel_error = rel_err;
  r.pass = abs_err <= abs_tol && rel_err <= rel_tol;
  return r;
}

Eigen::VectorXd gauss_solve(Eigen::MatrixXd a, Eigen::VectorXd b) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    for (Eigen::Index r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (std::abs(a(pivot, col)) < 1e-300)
      throw NumericalError("oracle: singular system");
    if (pivot != col) {
      a.row(pivot).swap(a.row(col));
      std::swap(b[pivot], b[col]);
    }
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a(r, col) / a(col, col);
      a.row(r) -= f * a.row(col);
      b[r] -= f * b[col];
    }
  }
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = b[i] / a(i, i);
  return x;
}

Eigen::VectorXd normal_equations(const Eigen::VectorXd& c, const Eigen::MatrixXd& g,
                                 double lambda, double beta,
                                 const Eigen::VectorXd& alpha_bar) {
  const Eigen::Index n = g.cols();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index m = 0; m < g.rows(); ++m) a(i, j) += g(m, i) * g(m, j);
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) += lambda + beta;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index m = 0; m < g.rows(); ++m) rhs[i] += g(m, i) * c[m];
    rhs[i] += beta * alpha_bar[i];
  }
  return gauss_solve(std::move(a), std::move(rhs));
}

namespace {

double truncated_power(double u, int e) {
  if (u < 0.0) return 0.0;
  if (e == 0) return 1.0;
  return std::pow(u, e);
}

double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int j = 2; j <= n; ++j) r *= j;
  return r;
}

}  // namespace

double cardinal_bspline_closed_form(int order, double x) {
  double s = 0.0;
  for (int j = 0; j <= order; ++j) {
    double sign = (j % 2 == 0) ? 1.0 : -1.0;
    s += sign * binom(order, j) * truncated_power(x - j, order - 1);
  }
  return s / factorial(order - 1);
}

double mother_wavelet_direct(int order, double x) {
  double r = 0.0;
  for (int n = 0; n <= 3 * order - 2; ++n) {
    double q = 0.0;
    for (int j = 0; j <= order; ++j)
      q += binom(order, j) * cardinal_bspline_closed_form(2 * order, n - j + 1.0);
    q *= ((n % 2 == 0) ? 1.0 : -1.0) / std::pow(2.0, order - 1);
    r += q * cardinal_bspline_closed_form(order, 2.0 * x - n);
  }
  return r;
}

double quadrature(double a, double b, int n, const std::function<double(double)>& f) {
  double h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += f(a + (i + 0.5) * h);
  return s * h;
}

Eigen::MatrixXd quadrature_gram(const BasisSpec& spec, int samples_per_axis) {
  std::vector<DirectionParam> dirs;
  dirs.reserve(static_cast<size_t>(samples_per_axis) * samples_per_axis);
  for (int it = 0; it < samples_per_axis; ++it) {
    double theta = -M_PI + 2.0 * M_PI * (it + 0.5) / samples_per_axis;
    for (int ig = 0; ig < samples_per_axis; ++ig) {
      double gamma = -1.0 + 2.0 * (ig + 0.5) / samples_per_axis;
      dirs.push_back({theta, gamma});
    }
  }
  Eigen::MatrixXd g = basis_matrix(spec, dirs);
  return g.transpose() * g / static_cast<double>(dirs.size());
}

std::vector<uint8_t> visibility(const PointCloud& cloud, const CameraModel& cam,
                                double depth_eps) {
  int n = cloud.size();
  // Own projection math (no project_point).
  std::vector<double> u(static_cast<size_t>(n)), v(static_cast<size_t>(n)),
      z(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Eigen::Vector3d q = cam.rotation * cloud.positions[static_cast<size_t>(i)] +
                        cam.translation;
    z[static_cast<size_t>(i)] = q.z();
    if (q.z() > 0.0) {
      Eigen::Vector3d h = cam.intrinsics * q;
      u[static_cast<size_t>(i)] = h.x() / h.z();
      v[static_cast<size_t>(i)] = h.y() / h.z();
    }
  }
  auto in_bounds = [&](int i) {
    return z[static_cast<size_t>(i)] > 0.0 && u[static_cast<size_t>(i)] >= 0.0 &&
           u[static_cast<size_t>(i)] < cam.width && v[static_cast<size_t>(i)] >= 0.0 &&
           v[static_cast<size_t>(i)] < cam.height;
  };
  std::vector<uint8_t> vis(static_cast<size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    if (!in_bounds(i)) continue;
    long ci = static_cast<long>(std::floor(u[static_cast<size_t>(i)])) +
              static_cast<long>(cam.width) *
                  static_cast<long>(std::floor(v[static_cast<size_t>(i)]));
    double best = z[static_cast<size_t>(i)];
    for (int j = 0; j < n; ++j) {
      if (!in_bounds(j)) continue;
      long cj = static_cast<long>(std::floor(u[static_cast<size_t>(j)])) +
                static_cast<long>(cam.width) *
                    static_cast<long>(std::floor(v[static_cast<size_t>(j)]));
      if (cj == ci) best = std::min(best, z[static_cast<size_t>(j)]);
    }
    if (z[static_cast<size_t>(i)] <= best + depth_eps) vis[static_cast<size_t>(i)] = 1;
  }
  return vis;
}

uint64_t exp_golomb_total_bits(const std::vector<int64_t>& levels, int k) {
  uint64_t total = 0;
  for (int64_t lvl : levels) {
    uint64_t u = lvl >= 0 ? 2ull * static_cast<uint64_t>(lvl)
                          : 2ull * static_cast<uint64_t>(-(lvl + 1)) + 1ull;
    uint64_t val = u + (1ull << k);
    int bits = 0;
    while (val >> bits) ++bits;  // floor(log2(val)) + 1
    total += static_cast<uint64_t>(2 * (bits - 1) - k + 1);
  }
  return total;
}

}  // namespace slf::oracles
