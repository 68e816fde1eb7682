// SPDX-License-Identifier: Apache-2.0
#include "slf/basis.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace slf {
namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

// q_n of psi_o(x) = sum_n q_n N_o(2x - n), n = 0 .. 3o-2.
std::vector<double> compute_wavelet_coeffs(int order) {
  std::vector<double> q(3 * order - 1);
  double scale = 1.0 / std::pow(2.0, order - 1);
  for (int n = 0; n < static_cast<int>(q.size()); ++n) {
    double s = 0.0;
    for (int j = 0; j <= order; ++j)
      s += binomial(order, j) * cardinal_bspline(2 * order, n - j + 1.0);
    q[n] = ((n % 2 == 0) ? scale : -scale) * s;
  }
  return q;
}

double psi(const std::vector<double>& q, int order, double x) {
  // Support [0, 2o-1); left-closed like the order-1 indicator.
  if (x < 0.0 || x >= 2.0 * order - 1.0) return 0.0;
  double r = 0.0;
  for (int n = 0; n < static_cast<int>(q.size()); ++n)
    r += q[n] * cardinal_bspline(order, 2.0 * x - n);
  return r;
}

// Periodic wavelet at level t, offset j, evaluated at x in [0,1): finite
// wrap of the shifted copies whose support is hit.
double periodic_wavelet(const std::vector<double>& q, int order, int level,
                        int offset, double x) {
  double period = static_cast<double>(1 << level);
  double u0 = period * x - offset;
  double len = 2.0 * order - 1.0;
  int m_lo = static_cast<int>(std::floor(-u0 / period)) - 1;
  int m_hi = static_cast<int>(std::ceil((len - u0) / period)) + 1;
  double r = 0.0;
  for (int m = m_lo; m <= m_hi; ++m) r += psi(q, order, u0 + m * period);
  return r;
}

std::mutex q_cache_mutex;
std::map<int, std::vector<double>> q_cache;

const std::vector<double>& wavelet_coeffs(int order) {
  std::lock_guard<std::mutex> lock(q_cache_mutex);
  auto it = q_cache.find(order);
  if (it == q_cache.end())
    it = q_cache.emplace(order, compute_wavelet_coeffs(order)).first;
  return it->second;
}

int floor_log2(int v) {
  int t = 0;
  while (v >> (t + 1)) ++t;
  return t;
}

double wrap_unit(double x) {
  double w = x - std::floor(x);
  return (w >= 1.0) ? 0.0 : w;
}

}  // namespace

void BasisSpec::validate(bool enforce_scale_link) const {
  if (order < 1) throw InvalidArgument("basis order must be >= 1");
  if (scale_theta < 0 || scale_gamma < 0)
    throw InvalidArgument("basis scales must be >= 0");
  if (scale_theta + scale_gamma > 24)
    throw InvalidArgument("basis count 2^(s0+s1) too large");
  if (enforce_scale_link && scale_theta != scale_gamma + 1)
    throw InvalidArgument(
        "scale_theta must equal scale_gamma + 1 (override to lift)");
}

double cardinal_bspline(int order, double x) {
  if (order < 1) throw InvalidArgument("cardinal_bspline: order must be >= 1");
  if (x < 0.0 || x >= order) return 0.0;
  if (order == 1) return 1.0;
  double om1 = order - 1.0;
  return (x / om1) * cardinal_bspline(order - 1, x) +
         ((order - x) / om1) * cardinal_bspline(order - 1, x - 1.0);
}

double mother_wavelet(int order, double x) {
  if (order < 1) throw InvalidArgument("mother_wavelet: order must be >= 1");
  return psi(wavelet_coeffs(order), order, x);
}

double periodic_basis_1d(int order, int scale, int index, double x) {
  if (order < 1) throw InvalidArgument("periodic_basis_1d: order must be >= 1");
  if (scale < 0) throw InvalidArgument("periodic_basis_1d: scale must be >= 0");
  if (index < 0 || index >= (1 << scale))
    throw InvalidArgument("periodic_basis_1d: index out of range");
  if (index == 0) return 1.0;
  int level = floor_log2(index);
  int offset = index - (1 << level);
  return periodic_wavelet(wavelet_coeffs(order), order, level, offset, wrap_unit(x));
}

double evaluate_basis_2d(const BasisSpec& spec, const DirectionParam& d, int i) {
  spec.validate(false);
  if (i < 0 || i >= spec.count())
    throw InvalidArgument("evaluate_basis_2d: basis index out of range");
  int i0 = i & ((1 << spec.scale_theta) - 1);
  int i1 = i >> spec.scale_theta;
  double x0 = (d.theta + M_PI) / (2.0 * M_PI);
  double x1 = (d.gamma + 1.0) / 2.0;
  return periodic_basis_1d(spec.order, spec.scale_theta, i0, x0) *
         periodic_basis_1d(spec.order, spec.scale_gamma, i1, x1);
}

BasisEvaluator::BasisEvaluator(const BasisSpec& spec) : spec_(spec) {
  spec_.validate(false);
  q_ = wavelet_coeffs(spec_.order);
}

double BasisEvaluator::eval_1d(int index, double x) const {
  if (index == 0) return 1.0;
  int level = floor_log2(index);
  int offset = index - (1 << level);
  return periodic_wavelet(q_, spec_.order, level, offset, x);
}

void BasisEvaluator::row_into(const DirectionParam& d, Eigen::VectorXd& out) const {
  int n0 = 1 << spec_.scale_theta;
  int n1 = 1 << spec_.scale_gamma;
  out.resize(static_cast<Eigen::Index>(n0) * n1);
  double x0 = wrap_unit((d.theta + M_PI) / (2.0 * M_PI));
  double x1 = wrap_unit((d.gamma + 1.0) / 2.0);
  Eigen::VectorXd theta_vals(n0), gamma_vals(n1);
  for (int i = 0; i < n0; ++i) theta_vals[i] = eval_1d(i, x0);
  for (int i = 0; i < n1; ++i) gamma_vals[i] = eval_1d(i, x1);
  for (int i1 = 0; i1 < n1; ++i1)
    for (int i0 = 0; i0 < n0; ++i0)
      out[static_cast<Eigen::Index>(i1) * n0 + i0] = theta_vals[i0] * gamma_vals[i1];
}

Eigen::VectorXd BasisEvaluator::row(const DirectionParam& d) const {
  Eigen::VectorXd out;
  row_into(d, out);
  return out;
}

Eigen::MatrixXd basis_matrix(const BasisSpec& spec,
                             const std::vector<DirectionParam>& directions) {
  BasisEvaluator eval(spec);
  Eigen::MatrixXd g(static_cast<Eigen::Index>(directions.size()), spec.count());
  Eigen::VectorXd row;
  for (size_t j = 0; j < directions.size(); ++j) {
    eval.row_into(directions[j], row);
    g.row(static_cast<Eigen::Index>(j)) = row;
  }
  return g;
}

}  // namespace slf
