// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstring>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "slf/basis.hpp"

using namespace slf;

TEST_CASE("cardinal B-spline: pinned values and domain") {
  CHECK(cardinal_bspline(1, 0.5) == 1.0);
  CHECK(cardinal_bspline(1, -0.1) == 0.0);
  CHECK(cardinal_bspline(1, 1.0) == 0.0);
  CHECK(cardinal_bspline(2, 1.0) == doctest::Approx(1.0));
  CHECK(cardinal_bspline(2, 0.5) == doctest::Approx(0.5));
  CHECK(cardinal_bspline(4, 2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(oracles::cardinal_bspline_closed_form(4, 2.0) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(cardinal_bspline(0, 0.5), InvalidArgument);
}

TEST_CASE("cardinal B-spline: recursion agrees with closed form") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> x_dist(-1.0, 5.0);
  for (int order = 1; order <= 4; ++order) {
    for (int i = 0; i < 200; ++i) {
      double x = x_dist(rng);
      CHECK(cardinal_bspline(order, x) ==
            doctest::Approx(oracles::cardinal_bspline_closed_form(order, x))
                .epsilon(1e-10));
    }
  }
}

TEST_CASE("mother wavelet: Haar case and regression value") {
  CHECK(mother_wavelet(1, 0.25) == doctest::Approx(1.0));
  CHECK(mother_wavelet(1, 0.75) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(mother_wavelet(0, 0.1), InvalidArgument);

  // Direct-summation oracle for the order-2 wavelet at x = 0.75; the exact
  // rational value is -5/24.
  double oracle = oracles::mother_wavelet_direct(2, 0.75);
  CHECK(oracle == doctest::Approx(-5.0 / 24.0).epsilon(1e-12));
  CHECK(mother_wavelet(2, 0.75) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("mother wavelet: zero mean and support, orders 1..4") {
  for (int order = 1; order <= 4; ++order) {
    double len = 2.0 * order - 1.0;
    double integral = oracles::quadrature(
        0.0, len, 1 << 20, [&](double x) { return mother_wavelet(order, x); });
    CHECK(std::abs(integral) < 1e-9);
    CHECK(mother_wavelet(order, -0.01) == 0.0);
    CHECK(mother_wavelet(order, len + 0.01) == 0.0);
  }
}

TEST_CASE("periodic 1D family: DC member, periodicity, index bounds") {
  for (int order : {1, 2, 3, 4}) {
    CHECK(periodic_basis_1d(order, 3, 0, 0.137) == 1.0);
    CHECK(periodic_basis_1d(order, 3, 0, 0.9) == 1.0);
  }
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> x_dist(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    double x = x_dist(rng);
    int index = static_cast<int>(rng() % 8);
    double a = periodic_basis_1d(2, 3, index, x);
    double b = periodic_basis_1d(2, 3, index, x + 1.0);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
  CHECK_THROWS_AS(periodic_basis_1d(2, 3, 8, 0.5), InvalidArgument);
  CHECK_THROWS_AS(periodic_basis_1d(2, 3, -1, 0.5), InvalidArgument);
}

TEST_CASE("periodic 1D family: first Haar member is the Haar wavelet itself") {
  // Level-0 member: the mother Haar wavelet periodized over period 1, taken
  // verbatim. The quadrature oracle confirms it already has unit norm, so
  // the value at 0.25 is the plain Haar value +1.
  auto member = [](double x) { return periodic_basis_1d(1, 1, 1, x); };
  double norm2 = oracles::quadrature(0.0, 1.0, 1 << 16,
                                     [&](double x) { return member(x) * member(x); });
  CHECK(std::sqrt(norm2) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(member(0.25) == doctest::Approx(mother_wavelet(1, 0.25)).epsilon(1e-12));
  CHECK(member(0.25) == doctest::Approx(1.0).epsilon(1e-12));
}

// Finer members keep the mother wavelet's amplitude, so their L2 norms decay
// as 2^{-t/2}; a scalar ridge penalty therefore shrinks fine detail harder.
TEST_CASE("periodic 1D family: level norm law") {
  for (int order : {1, 2, 3, 4}) {
    double psi_norm2 = oracles::quadrature(
        0.0, 2.0 * order - 1.0, 1 << 18,
        [&](double x) { return mother_wavelet(order, x) * mother_wavelet(order, x); });
    for (int level = 0; level < 4; ++level) {
      int scale = level + 1;
      for (int index = 1 << level; index < (1 << (level + 1)); ++index) {
        double norm2 = oracles::quadrature(0.0, 1.0, 1 << 16, [&](double x) {
          double v = periodic_basis_1d(order, scale, index, x);
          return v * v;
        });
        CAPTURE(order);
        CAPTURE(level);
        CAPTURE(index);
        CHECK(norm2 > 0.0);
        // Offset independence: all members of a level share one norm.
        double norm2_first = oracles::quadrature(0.0, 1.0, 1 << 16, [&](double x) {
          double v = periodic_basis_1d(order, scale, 1 << level, x);
          return v * v;
        });
        CHECK(norm2 == doctest::Approx(norm2_first).epsilon(1e-9));
        // Once copies stop self-overlapping the norm is |psi| * 2^{-t/2}.
        if ((1 << level) >= 2 * order - 1)
          CHECK(std::sqrt(norm2) ==
                doctest::Approx(std::sqrt(psi_norm2 / (1 << level))).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("periodic 1D family: order-1 family is orthogonal with 2^-t norms") {
  const int scale = 3;
  const int n = 1 << scale;
  const int samples = 1 << 16;
  auto level_of = [](int index) {
    int t = 0;
    while (index >> (t + 1)) ++t;
    return t;
  };
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      double ip = oracles::quadrature(0.0, 1.0, samples, [&](double x) {
        return periodic_basis_1d(1, scale, a, x) * periodic_basis_1d(1, scale, b, x);
      });
      double want = 0.0;
      if (a == b) want = (a == 0) ? 1.0 : std::pow(2.0, -level_of(a));
      CAPTURE(a);
      CAPTURE(b);
      CHECK(std::abs(ip - want) < 1e-6);
    }
  }
}

TEST_CASE("2D basis: DC member, separability, index bounds") {
  BasisSpec spec;  // defaults: order 2, scales 4/3, N = 128
  spec.validate();
  CHECK(spec.count() == 128);
  DirectionParam d{0.3, -0.4};
  CHECK(evaluate_basis_2d(spec, d, 0) == 1.0);
  CHECK_THROWS_AS(evaluate_basis_2d(spec, d, 128), InvalidArgument);
  CHECK_THROWS_AS(evaluate_basis_2d(spec, d, -1), InvalidArgument);

  // Bit-identical to the composed 1D calls.
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> th(-M_PI, M_PI);
  std::uniform_real_distribution<double> ga(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    DirectionParam dir{th(rng), ga(rng)};
    int i = static_cast<int>(rng() % 128);
    int i0 = i % 16;
    int i1 = i / 16;
    double composed = periodic_basis_1d(2, 4, i0, (dir.theta + M_PI) / (2.0 * M_PI)) *
                      periodic_basis_1d(2, 3, i1, (dir.gamma + 1.0) / 2.0);
    CHECK(evaluate_basis_2d(spec, dir, i) == composed);
  }
}

TEST_CASE("2D basis: order-1 level-0 product matches 1D oracle values") {
  BasisSpec spec{1, 4, 3};
  // theta and gamma chosen so both map to 0.25 on the unit interval.
  DirectionParam d{-M_PI / 2.0, -0.5};
  int i = 1 + (1 << spec.scale_theta);
  double w_theta = periodic_basis_1d(1, 4, 1, 0.25);
  double w_gamma = periodic_basis_1d(1, 3, 1, 0.25);
  CHECK(evaluate_basis_2d(spec, d, i) ==
        doctest::Approx(w_theta * w_gamma).epsilon(1e-12));
}

TEST_CASE("basis matrix: shape, DC column, determinism") {
  BasisSpec spec;
  std::vector<DirectionParam> dirs;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> th(-M_PI, M_PI);
  std::uniform_real_distribution<double> ga(-1.0, 1.0);
  for (int i = 0; i < 5; ++i) dirs.push_back({th(rng), ga(rng)});

  Eigen::MatrixXd g = basis_matrix(spec, dirs);
  CHECK(g.rows() == 5);
  CHECK(g.cols() == 128);
  for (int j = 0; j < 5; ++j) CHECK(g(j, 0) == 1.0);

  Eigen::MatrixXd g2 = basis_matrix(spec, dirs);
  CHECK(std::memcmp(g.data(), g2.data(),
                    sizeof(double) * static_cast<size_t>(g.size())) == 0);

  Eigen::MatrixXd empty = basis_matrix(spec, {});
  CHECK(empty.rows() == 0);
  CHECK(empty.cols() == 128);
}

TEST_CASE("basis matrix: order-1 Gram over an equal-area grid is diagonal") {
  BasisSpec spec{1, 4, 3};
  // 256 x 256 = 2^16 equal-area grid directions. Haar members are mutually
  // orthogonal; the diagonal carries the product of the 1D level norms.
  Eigen::MatrixXd gram = oracles::quadrature_gram(spec, 256);
  auto norm2_1d = [](int index) {
    if (index == 0) return 1.0;
    int t = 0;
    while (index >> (t + 1)) ++t;
    return std::pow(2.0, -t);
  };
  for (int i = 0; i < gram.rows(); ++i) {
    for (int j = 0; j < gram.cols(); ++j) {
      double want = 0.0;
      if (i == j) want = norm2_1d(i % 16) * norm2_1d(i / 16);
      CHECK(std::abs(gram(i, j) - want) < 0.02);
    }
  }
}

TEST_CASE("basis spec validation") {
  BasisSpec bad{2, 3, 3};
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  CHECK_NOTHROW(bad.validate(false));
  BasisSpec neg{0, 4, 3};
  CHECK_THROWS_AS(neg.validate(), InvalidArgument);
}
