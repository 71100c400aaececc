#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lsmlab/density_model.hpp"
#include "lsmlab/lattice.hpp"

using namespace lsmlab;

TEST_CASE("meet and join are componentwise min and max") {
  CHECK(meet({1, 3}, {2, 2}) == MultiIndex{1, 2});
  CHECK(join({1, 3}, {2, 2}) == MultiIndex{2, 3});
  CHECK(meet({0, 5}, {5, 0}) == MultiIndex{0, 0});
  CHECK(join({0, 5}, {5, 0}) == MultiIndex{5, 5});
  MultiIndex x{4, -2, 7};
  CHECK(meet(x, x) == x);
  CHECK(join(x, x) == x);
  CHECK_THROWS_AS(meet({1, 2}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("meet/join lattice identities on sampled triples") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coord(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    MultiIndex x(3), y(3), z(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = coord(rng);
      y[i] = coord(rng);
      z[i] = coord(rng);
    }
    // Distributivity.
    CHECK(meet(x, join(y, z)) == join(meet(x, y), meet(x, z)));
    // meet + join = x + y componentwise.
    MultiIndex m = meet(x, y), j = join(x, y);
    for (int i = 0; i < 3; ++i) CHECK(m[i] + j[i] == x[i] + y[i]);
    CHECK(comparable(x, x));
  }
  CHECK(!comparable({0, 1}, {1, 0}));
}

TEST_CASE("lattice function storage and integral") {
  LatticeFunction f({0}, {2}, {1.0, 2.0, 3.0});
  CHECK(f.integral() == doctest::Approx(6.0));
  CHECK(f.at({1}) == 2.0);
  CHECK(f.at({5}) == 0.0);  // implicit zero outside the box
  CHECK(f.at({-1}) == 0.0);
  CHECK_THROWS_AS(LatticeFunction({0}, {1}, {1.0, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(LatticeFunction({0, 0, 0, 0, 0}, {1, 1, 1, 1, 1},
                                  std::vector<double>(32, 1.0)),
                  std::invalid_argument);

  LatticeFunction d = LatticeFunction::delta(2);
  CHECK(d.at({0, 0}) == 1.0);
  CHECK(d.integral() == 1.0);
}

TEST_CASE("grid integral semantics sum * eps^d") {
  GridFunction ones({0.0}, 0.01, {100}, std::vector<double>(100, 1.0));
  CHECK(ones.integral() == doctest::Approx(1.0));

  GridFunction g({0.0, 0.0}, 0.5, {3, 3}, std::vector<double>(9, 2.0));
  CHECK(g.integral() == doctest::Approx(2.0 * 9 * 0.25));
  CHECK(g.max_value() == 2.0);
}

TEST_CASE("gaussian model evaluates the closed form") {
  DensityModel g = DensityModel::standard_gaussian(1);
  CHECK(g(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-12));
  DensityModel g2 = DensityModel::standard_gaussian(2);
  std::vector<double> origin{0.0, 0.0};
  CHECK(g2(origin) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)).epsilon(1e-12));

  DensityModel corr = DensityModel::gaussian({0.0, 0.0}, {1.0, 0.5, 0.5, 1.0});
  // det = 0.75, value at 0 = 1 / (2 pi sqrt(det))
  CHECK(corr(origin) == doctest::Approx(1.0 / (2.0 * std::numbers::pi * std::sqrt(0.75))));
  CHECK_THROWS_AS(DensityModel::gaussian({0.0, 0.0}, {1.0, 2.0, 2.0, 1.0}),
                  std::invalid_argument);  // not positive definite
}

TEST_CASE("restrict_to_lattice samples the vertex lattice") {
  DensityModel u = DensityModel::uniform_box({0.0}, {1.0});
  GridFunction g = restrict_to_lattice(u, RealBox{{0.0}, {1.0}}, 0.5);
  CHECK(g.shape()[0] == 3);
  for (double v : g.values()) CHECK(v == 1.0);

  DensityModel n = DensityModel::standard_gaussian(1);
  GridFunction gn = restrict_to_lattice(n, RealBox{{-8.0}, {8.0}}, 0.01);
  CHECK(gn.values()[800] == doctest::Approx(0.3989422804014327));
  CHECK(gn.integral() == doctest::Approx(1.0).epsilon(1e-6));

  CHECK_THROWS_AS(restrict_to_lattice(n, RealBox{{-1.0}, {1.0}}, -0.5), std::invalid_argument);
}

TEST_CASE("product model restriction is the outer product of 1D restrictions") {
  DensityModel a = DensityModel::gaussian1d(0.0, 1.0);
  DensityModel b = DensityModel::uniform_box({-1.0}, {1.0});
  DensityModel p = DensityModel::product({a, b});
  RealBox box{{-1.0, -1.0}, {1.0, 1.0}};
  GridFunction gp = restrict_to_lattice(p, box, 0.5);
  GridFunction ga = restrict_to_lattice(a, RealBox{{-1.0}, {1.0}}, 0.5);
  GridFunction gb = restrict_to_lattice(b, RealBox{{-1.0}, {1.0}}, 0.5);
  for (std::size_t i = 0; i < ga.size(); ++i)
    for (std::size_t j = 0; j < gb.size(); ++j)
      CHECK(gp.values()[i * gb.size() + j] ==
            doctest::Approx(ga.values()[i] * gb.values()[j]).epsilon(1e-14));
}

TEST_CASE("restriction integral converges at first order on a cut domain") {
  // The box cuts the gaussian, so the vertex Riemann sum carries an O(eps)
  // boundary term; halving eps should halve the error.
  DensityModel n = DensityModel::standard_gaussian(1);
  const double exact = std::erf(1.0 / std::sqrt(2.0));
  auto err = [&](double eps) {
    return std::abs(restrict_to_lattice(n, RealBox{{-1.0}, {1.0}}, eps).integral() - exact);
  };
  double ratio = err(0.01) / err(0.02);
  CHECK(ratio > 0.4);
  CHECK(ratio < 0.6);
}

TEST_CASE("exp of concave piecewise-linear potential") {
  DensityModel m = DensityModel::exp_pl_concave({0.0, 1.0, 2.0}, {0.0, 1.0, 1.5});
  CHECK(m(0.5) == doctest::Approx(std::exp(0.5)));
  CHECK(m(1.5) == doctest::Approx(std::exp(1.25)));
  CHECK(m(2.5) == 0.0);
  CHECK(m(-0.5) == 0.0);
  // Convex kink rejected.
  CHECK_THROWS_AS(DensityModel::exp_pl_concave({0.0, 1.0, 2.0}, {0.0, 0.0, 5.0}),
                  std::invalid_argument);
}

TEST_CASE("tabulated model interpolates multilinearly") {
  GridFunction base({0.0, 0.0}, 1.0, {2, 2}, {0.0, 1.0, 2.0, 3.0});
  DensityModel t = DensityModel::tabulated(base);
  std::vector<double> mid{0.5, 0.5};
  CHECK(t(mid) == doctest::Approx(1.5));
  std::vector<double> node{1.0, 0.0};
  CHECK(t(node) == doctest::Approx(2.0));
  std::vector<double> outside{3.0, 0.0};
  CHECK(t(outside) == 0.0);
}

TEST_CASE("grid coordinate scaling relabels exactly") {
  GridFunction g({-1.0, -1.0}, 0.5, {5, 5}, std::vector<double>(25, 1.0));
  GridFunction s = g.scaled_coordinates(2.0);
  CHECK(s.spacing() == 1.0);
  CHECK(s.origin()[0] == -2.0);
  CHECK(s.values() == g.values());
}
