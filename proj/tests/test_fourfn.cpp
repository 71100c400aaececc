#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "lsmlab/fourfn.hpp"
#include "lsmlab/random_instances.hpp"

using namespace lsmlab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// FKG-correlation instance: mu a correlated gaussian, a/b increasing in a
// single coordinate; f1 = a mu, f2 = b mu, f3 = mu, f4 = a b mu satisfies
// the Ahlswede-Daykin hypothesis with a nontrivial conclusion gap.
ModelQuad make_fkg_correlation_quad(double rho) {
  const double lo = -4.0, hi = 4.0, eps = 0.025;
  DensityModel mu = DensityModel::gaussian({0.0, 0.0}, {1.0, rho, rho, 1.0});
  auto logistic = [](double v) { return 1.0 / (1.0 + std::exp(-1.5 * v)); };
  auto tabulate = [&](auto&& fn) {
    const std::size_t n = static_cast<std::size_t>(std::llround((hi - lo) / eps)) + 1;
    std::vector<double> vals(n * n);
    std::vector<double> pt(2);
    for (std::size_t i = 0; i < n; ++i) {
      pt[0] = lo + eps * i;
      for (std::size_t j = 0; j < n; ++j) {
        pt[1] = lo + eps * j;
        vals[i * n + j] = fn(pt);
      }
    }
    return DensityModel::tabulated(GridFunction({lo, lo}, eps, {n, n}, std::move(vals)));
  };
  auto f1 = tabulate([&](const std::vector<double>& p) { return logistic(p[0]) * mu(p); });
  auto f2 = tabulate([&](const std::vector<double>& p) { return logistic(p[1]) * mu(p); });
  auto f3 = tabulate([&](const std::vector<double>& p) { return mu(p); });
  auto f4 = tabulate(
      [&](const std::vector<double>& p) { return logistic(p[0]) * logistic(p[1]) * mu(p); });
  return ModelQuad{f1, f2, f3, f4};
}

DensityModel make_gamma_like(double c) {
  const int n = 4000;
  const double lo = 1e-3, hi = 30.0;
  std::vector<double> xs(n + 1), phis(n + 1);
  const double step = std::log(hi / lo) / n;
  for (int i = 0; i <= n; ++i) {
    xs[i] = lo * std::exp(step * i);
    phis[i] = c * std::log(xs[i]) - xs[i];
  }
  return DensityModel::exp_pl_concave(std::move(xs), std::move(phis));
}

}  // namespace

TEST_CASE("generalized mean special cases") {
  CHECK(generalized_mean({1.0, 0.5}, 2.0, 4.0) == doctest::Approx(3.0));
  CHECK(generalized_mean({0.0, 0.5}, 2.0, 8.0) == doctest::Approx(4.0));
  CHECK(generalized_mean({-kInf, 0.5}, 2.0, 4.0) == 2.0);
  CHECK(generalized_mean({kInf, 0.5}, 2.0, 4.0) == 4.0);
  CHECK(generalized_mean({-1.0, 0.5}, 2.0, 2.0) == doctest::Approx(2.0));  // idempotence
  CHECK(generalized_mean({0.0, 0.25}, 0.0, 3.0) == 0.0);  // zero with alpha <= 0
  CHECK(generalized_mean({-2.0, 0.5}, 0.0, 3.0) == 0.0);
  CHECK_THROWS_AS(generalized_mean({1.0, 1.5}, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(generalized_mean({1.0, 0.5}, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("generalized mean: monotone in alpha, idempotent, stable for huge alpha") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unif(0.1, 5.0);
  const double alphas[] = {-kInf, -40.0, -2.0, -1.0, 0.0, 0.25, 1.0, 3.0, 40.0, kInf};
  for (int trial = 0; trial < 100; ++trial) {
    double x = unif(rng), y = unif(rng);
    double prev = -kInf;
    for (double a : alphas) {
      double m = generalized_mean({a, 0.3}, x, y);
      CHECK(m >= prev - 1e-12);
      CHECK(m >= std::min(x, y) - 1e-12);
      CHECK(m <= std::max(x, y) + 1e-12);
      prev = m;
    }
    CHECK(generalized_mean({unif(rng), 0.7}, x, x) == doctest::Approx(x));
  }
  // No overflow for large arguments and exponents.
  CHECK(generalized_mean({200.0, 0.5}, 5.0, 3.0) ==
        doctest::Approx(5.0 * std::pow(0.5 + 0.5 * std::pow(3.0 / 5.0, 200.0), 1.0 / 200.0)));
}

TEST_CASE("discrete Ahlswede-Daykin: FKG case gives exact equality") {
  std::mt19937_64 rng(31);
  LatticeFunction mu = random_lsm_lattice(rng, 4, 4, 0.3);
  ReportPair pair = check_ad_discrete({mu, mu, mu, mu}, 0.0);
  CHECK(pair.hypothesis.passed);
  CHECK(pair.conclusion.passed);
  CHECK(pair.conclusion.worst_violation == 0.0);  // identical integrals, bitwise
}

TEST_CASE("discrete Ahlswede-Daykin: constant-top quadruple") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> v1(9), v2(9), vt(9, 1.0);
  for (double& v : v1) v = unif(rng);
  for (double& v : v2) v = unif(rng);
  LatticeFunction f1({0, 0}, {2, 2}, v1), f2({0, 0}, {2, 2}, v2), top({0, 0}, {2, 2}, vt);
  ReportPair pair = check_ad_discrete({f1, f2, top, top}, 0.0);
  CHECK(pair.hypothesis.passed);
  CHECK(pair.conclusion.passed);
  CHECK(pair.conclusion.worst_violation < 0.0);
}

TEST_CASE("discrete Ahlswede-Daykin: violated hypothesis carries a witness") {
  LatticeFunction lo({0, 0}, {1, 1}, {1e-3, 1e-3, 1e-3, 1e-3});
  LatticeFunction hi({0, 0}, {1, 1}, {2.0, 2.0, 2.0, 2.0});
  ReportPair pair = check_ad_discrete({hi, hi, lo, lo}, 1e-9);
  CHECK(!pair.hypothesis.passed);
  CHECK(pair.hypothesis.witness.size() == 2);
  CHECK(pair.hypothesis.worst_violation == doctest::Approx(4.0 - 1e-6));
  // The conclusion report is still informative (and false here).
  CHECK(!pair.conclusion.passed);
  CHECK(pair.theorem_instance_ok());  // hypothesis failed, nothing asserted
}

TEST_CASE("continuous limit: conclusion gap is sign-stable and converges") {
  ModelQuad q = make_fkg_correlation_quad(0.5);
  RealBox box{{-4.0, -4.0}, {4.0, 4.0}};
  std::vector<LimitRow> table = check_ad_continuous_limit(q, box, {0.4, 0.2, 0.1}, 1e-9);
  REQUIRE(table.size() == 3);
  for (const auto& row : table) {
    CHECK(row.hypothesis_pass);
    CHECK(row.conclusion_pass);
    CHECK(row.conclusion_gap > 0.0);
  }
  // Successive gaps settle down as eps shrinks.
  double change1 = std::abs(table[1].conclusion_gap - table[0].conclusion_gap) /
                   table[1].conclusion_gap;
  double change2 = std::abs(table[2].conclusion_gap - table[1].conclusion_gap) /
                   table[2].conclusion_gap;
  CHECK(change2 < change1);
  CHECK(change2 < 0.10);

  // Product quadruple factorizes exactly: gap identically zero.
  DensityModel prod = DensityModel::product(
      {DensityModel::gaussian1d(0.0, 1.0), DensityModel::gaussian1d(0.0, 1.0)});
  std::vector<LimitRow> ptable =
      check_ad_continuous_limit({prod, prod, prod, prod}, box, {0.4, 0.2}, 1e-9);
  for (const auto& row : ptable) CHECK(row.conclusion_gap == 0.0);

  CHECK(check_ad_continuous_limit(q, box, {}, 1e-9).empty());
}

TEST_CASE("Cordero-Erausquin-Maurey checker") {
  SampleSpec spec;
  spec.count = 20000;
  spec.seed = 7;
  spec.box = RealBox{{-6.0}, {6.0}};
  spec.quad_eps = 1e-3;

  DensityModel g = DensityModel::gaussian1d(0.3, 1.4);
  ReportPair same = check_cem({g, g, g, g}, 0.5, spec, 1e-9);
  CHECK(same.hypothesis.passed);
  CHECK(same.conclusion.passed);
  CHECK(std::abs(same.conclusion.worst_violation) < 1e-12);

  // Bimodal f1 = f2 = f3 = f4 violates the hypothesis at straddling pairs.
  const std::size_t n = 1200;
  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = -6.0 + 12.0 * (static_cast<double>(i) + 0.5) / n;
    auto bump = [&](double c) { return std::exp(-(x - c) * (x - c) / (2.0 * 0.25)); };
    vals[i] = bump(-2.0) + bump(2.0);
  }
  DensityModel bimodal =
      DensityModel::tabulated(GridFunction({-6.0 + 6.0 / n}, 12.0 / n, {n}, std::move(vals)));
  ReportPair bad = check_cem({bimodal, bimodal, bimodal, bimodal}, 0.5, spec, 1e-9);
  CHECK(!bad.hypothesis.passed);
  REQUIRE(bad.hypothesis.witness.size() == 2);
  // The witness straddles the valley.
  CHECK(bad.hypothesis.witness[0][0] * bad.hypothesis.witness[1][0] < 0.0);

  CHECK_THROWS_AS(check_cem({g, g, g, g}, 0.0, spec, 1e-9), std::invalid_argument);
  CHECK_THROWS_AS(check_cem({g, g, g, g}, 1.0, spec, 1e-9), std::invalid_argument);
}

TEST_CASE("unified checker: min/max route matches discrete Ahlswede-Daykin") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    LatticeQuad lq = random_ad_quad(rng, 4);
    // Express the same data as tabulated models on a unit-spacing grid.
    auto as_model = [](const LatticeFunction& f) {
      std::vector<double> origin(f.dim());
      for (int i = 0; i < f.dim(); ++i) origin[i] = f.box().lower[i];
      return DensityModel::tabulated(GridFunction(origin, 1.0, f.box().extents(), f.values()));
    };
    ModelQuad mq{as_model(lq.f1), as_model(lq.f2), as_model(lq.f3), as_model(lq.f4)};
    SampleSpec spec;
    spec.quad_eps = 1.0;
    spec.box = RealBox{{static_cast<double>(lq.f1.box().lower[0]),
                        static_cast<double>(lq.f1.box().lower[1])},
                       {static_cast<double>(lq.f1.box().upper[0]),
                        static_cast<double>(lq.f1.box().upper[1])}};
    ReportPair viaUnified = check_unified(mq, {-kInf, 0.3}, {kInf, 0.7}, spec, 1e-9);
    ReportPair viaAd = check_ad_discrete(lq, 1e-9);
    CHECK(viaUnified.hypothesis.passed == viaAd.hypothesis.passed);
    CHECK(viaUnified.conclusion.passed == viaAd.conclusion.passed);
  }
}

TEST_CASE("unified checker: arithmetic means on equal log-concave functions") {
  DensityModel g = DensityModel::gaussian1d(3.5, 0.8);
  SampleSpec spec;
  spec.count = 20000;
  spec.seed = 11;
  spec.box = RealBox{{0.01}, {9.0}};
  spec.quad_eps = 1e-3;
  ReportPair pair = check_unified({g, g, g, g}, {1.0, 0.35}, {1.0, 0.65}, spec, 1e-9);
  CHECK(pair.hypothesis.passed);
  CHECK(pair.conclusion.passed);
}

TEST_CASE("unified checker: geometric means with balanced monomials") {
  const double t = 0.4, c3 = 1.0, c4 = 2.0;
  const double c1 = t * c3 + (1.0 - t) * c4;
  const double c2 = (1.0 - t) * c3 + t * c4;
  ModelQuad q{make_gamma_like(c1), make_gamma_like(c2), make_gamma_like(c3),
              make_gamma_like(c4)};
  SampleSpec spec;
  spec.count = 20000;
  spec.seed = 3;
  spec.box = RealBox{{1e-3}, {25.0}};
  spec.quad_eps = 2e-3;
  ReportPair pair = check_unified(q, {0.0, t}, {0.0, 1.0 - t}, spec, 3e-5);
  CHECK(pair.hypothesis.passed);
  CHECK(pair.conclusion.passed);

  // Support touching zero with alpha <= 0 is rejected.
  SampleSpec bad = spec;
  bad.box = RealBox{{0.0}, {25.0}};
  CHECK_THROWS_AS(check_unified(q, {0.0, t}, {0.0, 1.0 - t}, bad, 1e-9),
                  std::invalid_argument);
}

TEST_CASE("generalized Prekopa-Leindler checker") {
  SampleSpec spec;
  spec.count = 20000;
  spec.seed = 19;
  spec.box = RealBox{{1e-6}, {6.0}};
  spec.quad_eps = 1e-3;

  std::mt19937_64 rng(77);
  DensityModel f = random_decreasing_log_concave_model(rng);
  FourFnInstance inst;
  inst.functions = ModelQuad{f, f, f, f};
  inst.r = 0.5;
  inst.mean3 = MeanSpec{0.6, 0.3};
  inst.mean4 = MeanSpec{0.2, 0.7};
  inst.m = 0.3 * 0.5 + 0.5 * 0.7;  // s r + (1-r) t
  ReportPair pair = check_general_pl(inst, spec, 1e-9);
  CHECK(pair.hypothesis.passed);
  CHECK(pair.conclusion.passed);
  CHECK(std::abs(pair.conclusion.worst_violation) < 1e-10);  // equal quadruple

  // Exponent constraint enforced.
  FourFnInstance broken = inst;
  broken.m = 0.9;
  CHECK_THROWS_AS(check_general_pl(broken, spec, 1e-9), std::invalid_argument);

  // Hypothesis-failing instance: conclusion is not asserted by the theorem.
  const auto& pl = std::get<ExpPLConcaveModel>(f.family());
  std::vector<double> tiny = pl.knot_phi;
  for (double& v : tiny) v -= 5.0;  // f3, f4 too small for the hypothesis
  DensityModel small = DensityModel::exp_pl_concave(pl.knot_x, tiny);
  FourFnInstance failing = inst;
  failing.functions = ModelQuad{f, f, small, small};
  ReportPair fp = check_general_pl(failing, spec, 1e-9);
  CHECK(!fp.hypothesis.passed);
  CHECK(fp.hypothesis.witness.size() == 2);
  CHECK(fp.theorem_instance_ok());
}

TEST_CASE("homogeneity: scaling functions leaves constructive verdicts unchanged") {
  std::mt19937_64 rng(99);
  FourFnInstance inst = random_general_pl_instance(rng);
  SampleSpec spec;
  spec.count = 5000;
  spec.seed = 5;
  spec.box = RealBox{{1e-6}, {6.0}};
  spec.quad_eps = 2e-3;
  ReportPair base = check_general_pl(inst, spec, 1e-8);

  FourFnInstance scaled = inst;
  const auto& q = std::get<ModelQuad>(inst.functions);
  auto scale_model = [](const DensityModel& m, double c) {
    const auto& pl = std::get<ExpPLConcaveModel>(m.family());
    std::vector<double> phis = pl.knot_phi;
    for (double& v : phis) v += std::log(c);
    return DensityModel::exp_pl_concave(pl.knot_x, phis);
  };
  scaled.functions = ModelQuad{q.f1, q.f2, scale_model(q.f3, 3.0), scale_model(q.f4, 3.0)};
  ReportPair after = check_general_pl(scaled, spec, 1e-8);
  CHECK(base.hypothesis.passed);
  CHECK(after.hypothesis.passed == base.hypothesis.passed);
  CHECK(after.conclusion.passed == base.conclusion.passed);
}

TEST_CASE("hypothesis implies conclusion across constructive instances") {
  std::mt19937_64 rng(1234);
  SampleSpec spec;
  spec.count = 4000;
  spec.box = RealBox{{1e-6}, {6.0}};
  spec.quad_eps = 2e-3;
  for (int i = 0; i < 50; ++i) {
    ReportPair pair = check_ad_discrete(random_ad_quad(rng, 5), 0.0);
    CHECK(pair.hypothesis.passed);
    CHECK(pair.conclusion.passed);
  }
  for (int i = 0; i < 30; ++i) {
    spec.seed = 100 + i;
    FourFnInstance inst = random_general_pl_instance(rng, i % 5 == 0);
    ReportPair pair = check_general_pl(inst, spec, 1e-8);
    CHECK(pair.hypothesis.passed);
    CHECK(pair.conclusion.passed);
  }
}
