#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lsmlab/random_instances.hpp"
#include "lsmlab/transport1d.hpp"

using namespace lsmlab;

namespace {

Density1D uniform_density(double lo, double hi, double eps = 1e-3) {
  return Density1D::from_function([](double) { return 1.0; }, lo, hi, eps);
}

Density1D gaussian_density(double mu, double sd, double lo, double hi, double eps = 1e-3) {
  return Density1D::from_function(
      [=](double x) {
        double z = (x - mu) / sd;
        return std::exp(-0.5 * z * z);
      },
      lo, hi, eps);
}

}  // namespace

TEST_CASE("cdf and inverse cdf on the uniform density") {
  Density1D u = uniform_density(0.0, 1.0, 0.01);
  CHECK(u.cdf(0.25) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(u.inverse_cdf(0.25) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(u.cdf(-1.0) == 0.0);
  CHECK(u.cdf(2.0) == 1.0);
  CHECK_THROWS_AS(u.inverse_cdf(0.0), std::invalid_argument);
  CHECK_THROWS_AS(u.inverse_cdf(1.5), std::invalid_argument);
}

TEST_CASE("gaussian cdf at the center is one half") {
  Density1D g = gaussian_density(0.0, 1.0, -8.0, 8.0);
  CHECK(g.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("inverse cdf round trip on interior points") {
  Density1D g = gaussian_density(0.3, 1.2, -8.0, 9.0);
  for (double x : {-2.0, -0.5, 0.3, 1.0, 2.5}) {
    CHECK(g.inverse_cdf(g.cdf(x)) == doctest::Approx(x).epsilon(1e-9));
  }
}

TEST_CASE("monotone map: identity, gaussian shift, uniform dilation") {
  Density1D g = gaussian_density(0.0, 1.0, -8.0, 8.0);
  TransportMap1D id = monotone_map(g, g, 512);
  for (std::size_t j = 0; j < id.x.size(); ++j) {
    CHECK(id.t[j] == doctest::Approx(id.x[j]).epsilon(1e-10));
    CHECK(id.t_prime[j] == doctest::Approx(1.0).epsilon(1e-9));
  }

  auto [a, b] = to_common_grid(gaussian_density(0.0, 1.0, -7.0, 9.0),
                               gaussian_density(1.0, 1.0, -7.0, 9.0));
  TransportMap1D shift = monotone_map(a, b, 512);
  for (std::size_t j = 0; j < shift.x.size(); ++j)
    CHECK(shift.t[j] - shift.x[j] == doctest::Approx(1.0).epsilon(1e-5));

  auto [c, d] = to_common_grid(uniform_density(0.0, 1.0, 5e-4), uniform_density(0.0, 2.0, 5e-4));
  TransportMap1D dil = monotone_map(c, d, 512);
  for (std::size_t j = 0; j < dil.x.size(); ++j) {
    CHECK(dil.t[j] == doctest::Approx(2.0 * dil.x[j]).epsilon(1e-6));
    CHECK(dil.t_prime[j] == doctest::Approx(2.0).epsilon(1e-3));
  }
}

TEST_CASE("analytic T' agrees with finite differences of the tabulated map") {
  std::mt19937_64 rng(41);
  auto [nu1, nu2] = random_density_pair(rng);
  const std::size_t k = 4096;
  TransportMap1D map = monotone_map(nu1, nu2, k);
  const std::size_t stride = 16;
  std::size_t checked = 0;
  for (std::size_t j = k / 20; j + stride < k - k / 20; j += stride) {
    double fd = (map.t[j + stride] - map.t[j - stride]) / (map.x[j + stride] - map.x[j - stride]);
    if (fd < 1e-3) continue;  // flat stretches have no meaningful relative scale
    CHECK(map.t_prime[j] == doctest::Approx(fd).epsilon(2e-2));
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("pushforward identity: integral phi(T) dnu1 = integral phi dnu2") {
  std::mt19937_64 rng(63);
  for (int trial = 0; trial < 5; ++trial) {
    auto [nu1, nu2] = random_density_pair(rng);
    auto expect_push = [&](auto&& phi) {
      double acc = 0.0;
      for (std::size_t kk = 0; kk < nu1.cells(); ++kk) {
        double x = nu1.center(kk);
        acc += nu1.value(kk) * phi(transport_value(nu1, nu2, x));
      }
      return acc * nu1.eps();
    };
    auto expect_direct = [&](auto&& phi) {
      double acc = 0.0;
      for (std::size_t kk = 0; kk < nu2.cells(); ++kk)
        acc += nu2.value(kk) * phi(nu2.center(kk));
      return acc * nu2.eps();
    };
    CHECK(expect_push([](double v) { return v; }) ==
          doctest::Approx(expect_direct([](double v) { return v; })).epsilon(1e-4));
    CHECK(expect_push([](double v) { return v * v; }) ==
          doctest::Approx(expect_direct([](double v) { return v * v; })).epsilon(1e-4));
    CHECK(expect_push([](double v) { return std::cos(v); }) ==
          doctest::Approx(expect_direct([](double v) { return std::cos(v); })).epsilon(1e-4));
  }
}

TEST_CASE("min/max pushforward on ordered and crossing pairs") {
  // Identical inputs: both pushforwards reproduce the density.
  Density1D g = gaussian_density(0.0, 1.0, -8.0, 8.0);
  auto [m1, p1] = minmax_pushforward(g, g);
  for (std::size_t k = 0; k < g.cells(); k += 97) {
    CHECK(m1.density(g.center(k)) == doctest::Approx(g.value(k)).epsilon(1e-9));
    CHECK(p1.density(g.center(k)) == doctest::Approx(g.value(k)).epsilon(1e-9));
  }

  // Stochastically ordered: T = x + 1 >= x, so nu- = nu1 and nu+ = nu2.
  auto [a, b] = to_common_grid(gaussian_density(0.0, 1.0, -7.0, 9.0),
                               gaussian_density(1.0, 1.0, -7.0, 9.0));
  auto [mo, po] = minmax_pushforward(a, b);
  for (std::size_t k = 0; k < a.cells(); k += 101) {
    CHECK(mo.density(a.center(k)) == doctest::Approx(a.value(k)).epsilon(1e-8));
    CHECK(po.density(a.center(k)) == doctest::Approx(b.value(k)).epsilon(1e-8));
  }

  // Variance widening: T(x) = 2x crosses the diagonal at 0, A = {x >= 0}.
  auto [c, d] = to_common_grid(gaussian_density(0.0, 1.0, -9.0, 9.0),
                               gaussian_density(0.0, 2.0, -9.0, 9.0));
  auto [mc, pc] = minmax_pushforward(c, d);
  CHECK(mc.raw_mass() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(pc.raw_mass() == doctest::Approx(1.0).epsilon(1e-6));
  // nu- follows n1 on the right half and n2 on the left half.
  CHECK(mc.density(1.5) == doctest::Approx(c.density(1.5)).epsilon(1e-6));
  CHECK(mc.density(-1.5) == doctest::Approx(d.density(-1.5)).epsilon(1e-6));
  CHECK(pc.density(1.5) == doctest::Approx(d.density(1.5)).epsilon(1e-6));
  CHECK(pc.density(-1.5) == doctest::Approx(c.density(-1.5)).epsilon(1e-6));
}

TEST_CASE("relative entropy quadrature") {
  CHECK(uniform_density(0.0, 1.0).relative_entropy() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(uniform_density(0.0, 2.0).relative_entropy() ==
        doctest::Approx(-std::log(2.0)).epsilon(5e-4));
  Density1D g = gaussian_density(0.0, 1.0, -8.0, 8.0, 2e-4);
  const double exact = -0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);
  CHECK(g.relative_entropy() == doctest::Approx(exact).epsilon(1e-6));
}

TEST_CASE("displacement entropy comparison is an identity-tight inequality") {
  // Identical pair: exact zero by shared quadrature paths.
  Density1D g = gaussian_density(0.2, 0.9, -8.0, 8.0);
  DisplacementDetail same = displacement_convexity_detail(g, g, 1e-8);
  CHECK(same.report.passed);
  CHECK(std::abs(same.report.worst_violation) <= 1e-8);
  CHECK(same.mass_identity == doctest::Approx(1.0).epsilon(1e-8));

  // Ordered pair: nu- = nu1 bitwise, violation exactly zero.
  auto [a, b] = to_common_grid(gaussian_density(0.0, 1.0, -7.0, 9.0),
                               gaussian_density(1.0, 1.0, -7.0, 9.0));
  DisplacementDetail ordered = displacement_convexity_detail(a, b, 1e-8);
  CHECK(ordered.report.passed);
  CHECK(std::abs(ordered.report.worst_violation) <= 1e-8);
  CHECK(ordered.entropy_minus == doctest::Approx(ordered.entropy_1).epsilon(1e-12));
  CHECK(ordered.entropy_plus == doctest::Approx(ordered.entropy_2).epsilon(1e-12));

  // Crossing pair: the pointwise rearrangement makes the comparison an
  // equality; the checked inequality holds with zero margin.
  auto [c, d] = to_common_grid(gaussian_density(0.0, 1.0, -9.0, 9.0),
                               gaussian_density(0.0, 2.0, -9.0, 9.0));
  DisplacementDetail crossing = displacement_convexity_detail(c, d, 1e-6);
  CHECK(crossing.report.passed);
  CHECK(std::abs(crossing.report.worst_violation) <= 1e-6);
  CHECK(crossing.mass_identity == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(crossing.entropy_minus + crossing.entropy_plus ==
        doctest::Approx(crossing.entropy_1 + crossing.entropy_2).epsilon(1e-9));
}

TEST_CASE("mean pushforward: degenerate weights and affine case") {
  auto [a, b] = to_common_grid(gaussian_density(1.0, 1.0, -5.5, 7.5),
                               gaussian_density(3.0, 1.0, -5.5, 7.5));
  // Weight 1 on the first argument reproduces nu1.
  MeanPushforward keep = mean_pushforward(a, b, {1.0, 1.0});
  for (double x : {0.0, 0.8, 1.9, 3.0})
    CHECK(keep.density.density(x) == doctest::Approx(a.density(x)).epsilon(1e-3));

  // nu1 = nu2: H = x and the pushforward is nu1 again.
  MeanPushforward same = mean_pushforward(a, a, {1.0, 0.5});
  for (double x : {-0.5, 0.6, 1.7, 2.4})
    CHECK(same.density.density(x) == doctest::Approx(a.density(x)).epsilon(1e-3));

  // N(1,1) -> N(3,1) with the arithmetic midpoint: density of N(2,1).
  MeanPushforward mid = mean_pushforward(a, b, {1.0, 0.5});
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  for (double x : {1.0, 1.6, 2.0, 2.7, 3.2}) {
    double expected = norm * std::exp(-0.5 * (x - 2.0) * (x - 2.0));
    CHECK(mid.density.density(x) == doctest::Approx(expected).epsilon(1e-3));
  }
}

TEST_CASE("mean pushforward approaches the min/max pushforwards for large |alpha|") {
  std::mt19937_64 rng(15);
  auto [nu1, nu2] = random_density_pair(rng, /*positive_support=*/true);
  auto [mn, mx] = minmax_pushforward(nu1, nu2);
  // The min/max pushforwards jump at diagonal crossings, so agreement is
  // measured in L1, where the smoothed transition washes out.
  auto l1_distance = [&](const Density1D& d1, const Density1D& d2) {
    double acc = 0.0;
    for (std::size_t k = 0; k < d1.cells(); ++k) {
      double x = d1.center(k);
      acc += std::abs(d1.density(x) - d2.density(x));
    }
    return acc * d1.eps();
  };
  MeanPushforward near_min = mean_pushforward(nu1, nu2, {-60.0, 0.5});
  MeanPushforward nearer_min = mean_pushforward(nu1, nu2, {-240.0, 0.5});
  double d1 = l1_distance(mn, near_min.density);
  double d2 = l1_distance(mn, nearer_min.density);
  CHECK(d2 <= d1 + 1e-12);
  CHECK(d2 < 0.02);

  MeanPushforward near_max = mean_pushforward(nu1, nu2, {240.0, 0.5});
  CHECK(l1_distance(mx, near_max.density) < 0.02);
}

TEST_CASE("derivative bound H3' >= T'^{1-s}") {
  // Identity map: equality.
  Density1D u = uniform_density(1.0, 2.0, 5e-4);
  CheckReport eq = derivative_bound_check(u, u, 1.0, 0.5, 1e-8);
  CHECK(eq.passed);
  CHECK(std::abs(eq.worst_violation) < 1e-9);

  // uniform[1,2] -> uniform[1,3]: T' = 2, alpha = 1, s = 1/2:
  // H' = 1.5 vs sqrt(2) = 1.414..., strict margin everywhere.
  auto [a, b] = to_common_grid(uniform_density(1.0, 2.0, 5e-4), uniform_density(1.0, 3.0, 5e-4));
  CheckReport strict = derivative_bound_check(a, b, 1.0, 0.5, 1e-8);
  CHECK(strict.passed);
  CHECK(strict.worst_violation == doctest::Approx(std::sqrt(2.0) - 1.5).epsilon(1e-2));

  // Random positive-support pairs over the (alpha, s) grid.
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    auto [nu1, nu2] = random_density_pair(rng, /*positive_support=*/true);
    for (double alpha : {0.25, 0.5, 0.75, 1.0})
      for (double s : {0.2, 0.5, 0.8}) {
        CheckReport r = derivative_bound_check(nu1, nu2, alpha, s, 1e-8);
        CHECK(r.passed);
      }
  }
  CHECK_THROWS_AS(derivative_bound_check(u, u, 1.5, 0.5, 1e-8), std::invalid_argument);
}

TEST_CASE("log-Laplace duality") {
  // f = 0 on [0,1]: log integral e^f = 0, the Gibbs density is uniform.
  DualityReport flat = log_laplace_duality_check([](double) { return 0.0; }, 0.0, 1.0, 1e-3,
                                                 {uniform_density(0.0, 1.0)}, 1e-8);
  CHECK(flat.passed);
  CHECK(flat.log_integral == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(flat.gibbs_gap) < 1e-10);
  CHECK(std::abs(flat.candidates[0].gap) < 1e-6);

  // f = -x^2/2 on [-8,8]: log integral = log sqrt(2 pi).
  DualityReport quad = log_laplace_duality_check([](double x) { return -0.5 * x * x; }, -8.0,
                                                 8.0, 2e-4, {uniform_density(-2.0, 2.0)}, 1e-6);
  CHECK(quad.passed);
  CHECK(quad.log_integral ==
        doctest::Approx(0.5 * std::log(2.0 * std::numbers::pi)).epsilon(1e-9));
  // Any non-Gibbs candidate sits strictly below the supremum.
  CHECK(quad.candidates[0].gap > 1e-3);
  CHECK(std::abs(quad.gibbs_gap) < 1e-6);
}

TEST_CASE("transport chain audit closes on FKG and generalized instances") {
  // FKG case: all four functions equal the density of nu1 = nu2.
  Density1D g = gaussian_density(0.1, 1.1, -8.0, 8.0);
  auto fn = [&g](double x) { return g.density(x); };
  TransportChainReport fkg = transport_fourfn_audit({fn, fn, fn, fn}, g, g, {1.0, 0.5},
                                                    {1.0, 0.5}, 0.5, /*minmax_mode=*/true, 1e-6);
  CHECK(fkg.passed);
  CHECK(std::abs(fkg.coupling_slack) < 1e-6);
  CHECK(std::abs(fkg.entropy_slack) < 1e-6);
  CHECK(std::abs(fkg.conclusion_slack) < 1e-6);
  for (double gap : fkg.duality_gaps) CHECK(std::abs(gap) < 1e-5);

  // Ahlswede-Daykin instance with slack: f1, f2 scaled down below f3 = f4.
  auto f1 = [&g](double x) { return 0.8 * g.density(x); };
  auto f2 = [&g](double x) { return 0.9 * g.density(x); };
  TransportChainReport ad = transport_fourfn_audit({f1, f2, fn, fn}, g, g, {1.0, 0.5},
                                                   {1.0, 0.5}, 0.5, true, 1e-6);
  CHECK(ad.passed);
  CHECK(ad.coupling_slack > 0.01);
  CHECK(ad.conclusion_slack > 0.01);

  // Generalized chain, equal log-concave functions on positive support.
  auto [p1, p2] = to_common_grid(gaussian_density(2.0, 0.5, 0.05, 6.0),
                                 gaussian_density(3.0, 0.7, 0.05, 6.0));
  auto pf = [&p1](double x) { return p1.density(x); };
  TransportChainReport gen = transport_fourfn_audit({pf, pf, pf, pf}, p1, p2, {1.0, 0.6},
                                                    {1.0, 0.4}, 0.5, false, 1e-6);
  CHECK(gen.coupling_slack >= -1e-6);
  CHECK(gen.entropy_slack >= -1e-6);
  CHECK(gen.conclusion_slack >= -1e-6);
}

TEST_CASE("derived entropy orientation holds; the printed swap generally fails") {
  // The derivation gives r H(nu3) + (1-r) H(nu4) <= m H(nu1) + (1-m) H(nu2).
  // A wide nu1 against a narrow nu2 with s = t = 0.2 makes the swapped
  // coefficient order genuinely negative, so the derived orientation is
  // the implemented one.
  auto [nu1, nu2] = to_common_grid(gaussian_density(2.5, 1.2, 0.05, 8.0),
                                   gaussian_density(2.5, 0.4, 0.05, 8.0));
  const double r = 0.5, s = 0.2, t = 0.2;
  const double m = s * r + (1.0 - r) * t;
  MeanPushforward push3 = mean_pushforward(nu1, nu2, {1.0, s});
  MeanPushforward push4 = mean_pushforward(nu1, nu2, {1.0, t});
  const double h1 = nu1.relative_entropy(), h2 = nu2.relative_entropy();
  const double h3 = push3.density.relative_entropy(), h4 = push4.density.relative_entropy();
  const double derived = (m * h1 + (1.0 - m) * h2) - (r * h3 + (1.0 - r) * h4);
  const double swapped = ((1.0 - m) * h1 + m * h2) - ((1.0 - r) * h3 + r * h4);
  CHECK(derived >= -1e-6);
  CHECK(swapped < -0.1);  // the printed coefficient order fails outright
}
