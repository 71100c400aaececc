#include "lsmlab/fourfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lsmlab/parallel.hpp"

namespace lsmlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv, v = 0.0;
  while (i > 0) {
    v += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return v;
}

constexpr std::uint64_t kHaltonBases[8] = {2, 3, 5, 7, 11, 13, 17, 19};

}  // namespace

double generalized_mean(const MeanSpec& spec, double x, double y) {
  const double a = spec.alpha;
  const double l = spec.lambda;
  if (!(l >= 0.0 && l <= 1.0)) throw std::invalid_argument("mean weight must lie in [0, 1]");
  if (!(x >= 0.0) || !(y >= 0.0)) throw std::invalid_argument("means need nonnegative arguments");
  if (l == 0.0) return y;
  if (l == 1.0) return x;
  if (a == kInf) return std::max(x, y);
  if (a == -kInf) return std::min(x, y);
  if (a <= 0.0 && (x == 0.0 || y == 0.0)) return 0.0;  // limit value
  if (a == 0.0) return std::pow(x, l) * std::pow(y, 1.0 - l);
  if (a == 1.0) return l * x + (1.0 - l) * y;
  // Factor out the dominant argument so large |alpha| stays finite.
  double pivot = a > 0.0 ? std::max(x, y) : std::min(x, y);
  if (pivot == 0.0) return 0.0;
  double s = l * std::pow(x / pivot, a) + (1.0 - l) * std::pow(y / pivot, a);
  return pivot * std::pow(s, 1.0 / a);
}

std::vector<double> generalized_mean(const MeanSpec& spec, std::span<const double> x,
                                     std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("mean argument dimension mismatch");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = generalized_mean(spec, x[i], y[i]);
  return out;
}

ReportPair check_ad_discrete(const LatticeQuad& q, double tol) {
  const int d = q.f1.dim();
  if (q.f2.dim() != d || q.f3.dim() != d || q.f4.dim() != d)
    throw std::invalid_argument("quadruple dimension mismatch");

  ReportPair out;
  CheckReport& hyp = out.hypothesis;
  hyp.scale = std::max(q.f1.max_value() * q.f2.max_value(), 1e-300);
  hyp.tolerance = tol * hyp.scale;

  double worst = -kInf;
  MultiIndex wx, wy;
  bool have = false;
  MultiIndex x(d), y(d), mt(d), jn(d);
  const std::size_t n1 = q.f1.size(), n2 = q.f2.size();
  for (std::size_t fx = 0; fx < n1; ++fx) {
    x = q.f1.unflatten(fx);
    const double v1 = q.f1.values()[fx];
    for (std::size_t fy = 0; fy < n2; ++fy) {
      y = q.f2.unflatten(fy);
      double lhs = v1 * q.f2.values()[fy];
      double cand;
      if (lhs == 0.0) {
        cand = -hyp.scale;
      } else {
        for (int i = 0; i < d; ++i) {
          mt[i] = std::min(x[i], y[i]);
          jn[i] = std::max(x[i], y[i]);
        }
        cand = lhs - q.f3.at(mt) * q.f4.at(jn);
      }
      if (!have || cand > worst) {
        worst = cand;
        wx = x;
        wy = y;
        have = true;
      }
    }
  }
  hyp.pairs_checked = static_cast<std::uint64_t>(n1) * n2;
  if (have) {
    hyp.worst_violation = worst;
    std::vector<double> px(wx.begin(), wx.end()), py(wy.begin(), wy.end());
    hyp.witness = {px, py};
  }
  hyp.finalize();

  CheckReport& con = out.conclusion;
  const double lhs = q.f1.integral() * q.f2.integral();
  const double rhs = q.f3.integral() * q.f4.integral();
  con.scale = std::max({lhs, rhs, 1e-300});
  con.tolerance = tol * con.scale;
  con.worst_violation = lhs - rhs;
  con.pairs_checked = 1;
  con.finalize();
  return out;
}

namespace {

// Shared pair scan for four grid functions on one common shape.
ReportPair ad_scan_grids(const GridFunction& g1, const GridFunction& g2, const GridFunction& g3,
                         const GridFunction& g4, double tol) {
  const int d = g1.dim();
  const auto& ext = g1.shape();
  if (g2.shape() != ext || g3.shape() != ext || g4.shape() != ext)
    throw std::invalid_argument("restricted lattices differ in shape");

  ReportPair out;
  CheckReport& hyp = out.hypothesis;
  hyp.scale = std::max(g1.max_value() * g2.max_value(), 1e-300);
  hyp.tolerance = tol * hyp.scale;

  std::vector<std::size_t> stride(d);
  stride[d - 1] = 1;
  for (int i = d - 2; i >= 0; --i) stride[i] = stride[i + 1] * ext[i + 1];
  const std::size_t n = g1.size();
  const double* v1 = g1.values().data();
  const double* v2 = g2.values().data();
  const double* v3 = g3.values().data();
  const double* v4 = g4.values().data();

  struct Cand {
    double worst = -kInf;
    std::size_t fx = 0, fy = 0;
    bool have = false;
  };
  std::vector<Cand> partial(n);
  parallel_chunks(n, [&](std::size_t, std::size_t begin, std::size_t end) {
    MultiIndex x(d), y(d);
    for (std::size_t fx = begin; fx < end; ++fx) {
      Cand local;
      std::size_t rem = fx;
      for (int i = d - 1; i >= 0; --i) {
        x[i] = static_cast<int>(rem % ext[i]);
        rem /= ext[i];
      }
      const double a = v1[fx];
      for (std::size_t fy = 0; fy < n; ++fy) {
        double lhs = a * v2[fy];
        double cand;
        if (lhs == 0.0) {
          cand = -hyp.scale;
        } else {
          std::size_t rem2 = fy, mt = 0, jn = 0;
          for (int i = d - 1; i >= 0; --i) {
            int yi = static_cast<int>(rem2 % ext[i]);
            rem2 /= ext[i];
            mt += stride[i] * static_cast<std::size_t>(std::min(x[i], yi));
            jn += stride[i] * static_cast<std::size_t>(std::max(x[i], yi));
          }
          cand = lhs - v3[mt] * v4[jn];
        }
        if (!local.have || cand > local.worst) {
          local.worst = cand;
          local.fx = fx;
          local.fy = fy;
          local.have = true;
        }
      }
      partial[fx] = local;
    }
  });

  Cand best;
  for (const auto& c : partial)
    if (c.have && (!best.have || c.worst > best.worst)) best = c;
  hyp.pairs_checked = static_cast<std::uint64_t>(n) * n;
  if (best.have) {
    hyp.worst_violation = best.worst;
    hyp.witness = {g1.point(best.fx), g1.point(best.fy)};
  }
  hyp.finalize();

  CheckReport& con = out.conclusion;
  const double lhs = g1.integral() * g2.integral();
  const double rhs = g3.integral() * g4.integral();
  con.scale = std::max({lhs, rhs, 1e-300});
  con.tolerance = tol * con.scale;
  con.worst_violation = lhs - rhs;
  con.pairs_checked = 1;
  con.finalize();
  return out;
}

}  // namespace

std::vector<LimitRow> check_ad_continuous_limit(const ModelQuad& q, const RealBox& box,
                                                const std::vector<double>& eps_list, double tol) {
  std::vector<LimitRow> table;
  for (double eps : eps_list) {
    GridFunction g1 = restrict_to_lattice(q.f1, box, eps);
    GridFunction g2 = restrict_to_lattice(q.f2, box, eps);
    GridFunction g3 = restrict_to_lattice(q.f3, box, eps);
    GridFunction g4 = restrict_to_lattice(q.f4, box, eps);
    ReportPair pair = ad_scan_grids(g1, g2, g3, g4, tol);
    LimitRow row;
    row.eps = eps;
    row.hypothesis_worst_rel = pair.hypothesis.relative();
    row.conclusion_gap = -pair.conclusion.worst_violation;
    row.hypothesis_pass = pair.hypothesis.passed;
    row.conclusion_pass = pair.conclusion.passed;
    table.push_back(row);
  }
  return table;
}

namespace {

struct SampledHypothesis {
  CheckReport report;
  double max_lhs = 0.0;
};

// Generic sampled hypothesis audit over low-discrepancy pairs (x, y) in
// box^2. lhs/rhs evaluate the two sides of the pointwise inequality.
template <typename Lhs, typename Rhs>
CheckReport sample_hypothesis(const SampleSpec& spec, int d, Lhs&& lhs_fn, Rhs&& rhs_fn,
                              double tol) {
  if (spec.box.dim() != d) throw std::invalid_argument("sample box dimension mismatch");
  if (2 * d > 8) throw std::invalid_argument("sampling supports dim <= 4");
  CheckReport rep;
  std::vector<double> x(d), y(d);
  double worst = -kInf;
  double max_lhs = 0.0;
  std::vector<double> wx, wy;
  const std::uint64_t offset = 1 + spec.seed;
  for (std::uint64_t i = 0; i < spec.count; ++i) {
    for (int k = 0; k < d; ++k) {
      double ux = radical_inverse(offset + i, kHaltonBases[k]);
      double uy = radical_inverse(offset + i, kHaltonBases[d + k]);
      x[k] = spec.box.lower[k] + ux * (spec.box.upper[k] - spec.box.lower[k]);
      y[k] = spec.box.lower[k] + uy * (spec.box.upper[k] - spec.box.lower[k]);
    }
    double lhs = lhs_fn(x, y);
    max_lhs = std::max(max_lhs, lhs);
    double cand = lhs == 0.0 ? -kInf : lhs - rhs_fn(x, y);
    if (cand > worst || wx.empty()) {
      worst = cand;
      wx = x;
      wy = y;
    }
  }
  rep.scale = max_lhs > 0.0 ? max_lhs : 1.0;
  rep.tolerance = tol * rep.scale;
  rep.worst_violation = worst == -kInf ? 0.0 : worst;
  rep.pairs_checked = spec.count;
  if (!wx.empty()) rep.witness = {wx, wy};
  rep.note = "low-discrepancy sample, seed " + std::to_string(spec.seed) + ", count " +
             std::to_string(spec.count);
  rep.finalize();
  return rep;
}

// Conclusion i1^e1 i2^e2 <= i3^e3 i4^e4: plain products for the
// Ahlswede-Daykin shape (all exponents 1), weighted for Thm 6.3.
CheckReport integral_conclusion(const ModelQuad& q, const SampleSpec& spec, double tol,
                                double e1, double e2, double e3, double e4) {
  const double i1 = quadrature_integral(q.f1, spec.box, spec.quad_eps);
  const double i2 = quadrature_integral(q.f2, spec.box, spec.quad_eps);
  const double i3 = quadrature_integral(q.f3, spec.box, spec.quad_eps);
  const double i4 = quadrature_integral(q.f4, spec.box, spec.quad_eps);
  CheckReport con;
  const double lhs = std::pow(i1, e1) * std::pow(i2, e2);
  const double rhs = std::pow(i3, e3) * std::pow(i4, e4);
  con.scale = std::max({lhs, rhs, 1e-300});
  con.tolerance = tol * con.scale;
  con.worst_violation = lhs - rhs;
  con.pairs_checked = 1;
  con.finalize();
  return con;
}

}  // namespace

ReportPair check_cem(const ModelQuad& q, double lambda, const SampleSpec& spec, double tol) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("lambda must lie strictly inside (0, 1)");
  const int d = q.f1.dim();
  if (d > 2) throw std::invalid_argument("check_cem supports d <= 2");

  ReportPair out;
  std::vector<double> mid1(d), mid2(d);
  out.hypothesis = sample_hypothesis(
      spec, d,
      [&](const std::vector<double>& x, const std::vector<double>& y) {
        return q.f1(x) * q.f2(y);
      },
      [&](const std::vector<double>& x, const std::vector<double>& y) {
        for (int i = 0; i < d; ++i) {
          mid1[i] = lambda * x[i] + (1.0 - lambda) * y[i];
          mid2[i] = (1.0 - lambda) * x[i] + lambda * y[i];
        }
        return q.f3(mid1) * q.f4(mid2);
      },
      tol);
  out.conclusion = integral_conclusion(q, spec, tol, 1.0, 1.0, 1.0, 1.0);
  return out;
}

ReportPair check_unified(const ModelQuad& q, MeanSpec mean3, MeanSpec mean4,
                         const SampleSpec& spec, double tol) {
  if (std::abs((1.0 - mean3.lambda) - mean4.lambda) > 1e-12)
    throw std::invalid_argument("unified check requires weights t and 1-t");
  const int d = q.f1.dim();

  if (mean3.alpha == -kInf && mean4.alpha == kInf) {
    // Min/max means are meet/join componentwise: delegate to the discrete
    // Ahlswede-Daykin semantics on the restricted lattice.
    GridFunction g1 = restrict_to_lattice(q.f1, spec.box, spec.quad_eps);
    GridFunction g2 = restrict_to_lattice(q.f2, spec.box, spec.quad_eps);
    GridFunction g3 = restrict_to_lattice(q.f3, spec.box, spec.quad_eps);
    GridFunction g4 = restrict_to_lattice(q.f4, spec.box, spec.quad_eps);
    ReportPair pair = ad_scan_grids(g1, g2, g3, g4, tol);
    pair.hypothesis.note = "min/max means: discrete Ahlswede-Daykin on the eps-lattice";
    return pair;
  }

  // The unified statement lives on (0,inf)^d.
  for (int i = 0; i < d; ++i)
    if (spec.box.lower[i] <= 0.0)
      throw std::invalid_argument("support must stay inside (0,inf)^d");

  ReportPair out;
  out.hypothesis = sample_hypothesis(
      spec, d,
      [&](const std::vector<double>& x, const std::vector<double>& y) {
        return q.f1(x) * q.f2(y);
      },
      [&](const std::vector<double>& x, const std::vector<double>& y) {
        std::vector<double> m3 = generalized_mean(mean3, x, y);
        std::vector<double> m4 = generalized_mean(mean4, x, y);
        return q.f3(m3) * q.f4(m4);
      },
      tol);
  out.conclusion = integral_conclusion(q, spec, tol, 1.0, 1.0, 1.0, 1.0);
  return out;
}

ReportPair check_general_pl(const FourFnInstance& instance, const SampleSpec& spec, double tol) {
  const auto* q = std::get_if<ModelQuad>(&instance.functions);
  if (q == nullptr)
    throw std::invalid_argument("generalized Prekopa-Leindler check needs continuous models");
  const double r = instance.r;
  const double s = instance.mean3.lambda;
  const double t = instance.mean4.lambda;
  const double m = instance.m;
  if (!(r > 0.0 && r < 1.0 && s > 0.0 && s < 1.0 && t > 0.0 && t < 1.0))
    throw std::invalid_argument("exponents r, s, t must lie in (0, 1)");
  if (std::abs(m - (s * r + (1.0 - r) * t)) > 1e-12)
    throw std::invalid_argument("exponent constraint m = s r + (1-r) t violated");
  const double alpha = instance.mean3.alpha, beta = instance.mean4.alpha;
  if (!(alpha >= 0.0 && alpha <= 1.0 && beta >= 0.0 && beta <= 1.0))
    throw std::invalid_argument("mean exponents must lie in [0, 1]");
  const int d = q->f1.dim();
  for (int i = 0; i < d; ++i)
    if (spec.box.lower[i] <= 0.0)
      throw std::invalid_argument("supports must stay inside (0,inf)^d");

  ReportPair out;
  out.hypothesis = sample_hypothesis(
      spec, d,
      [&](const std::vector<double>& x, const std::vector<double>& y) {
        double a = q->f1(x), b = q->f2(y);
        if (a == 0.0 || b == 0.0) return 0.0;
        return std::pow(a, m) * std::pow(b, 1.0 - m);
      },
      [&](const std::vector<double>& x, const std::vector<double>& y) {
        std::vector<double> m3 = generalized_mean(instance.mean3, x, y);
        std::vector<double> m4 = generalized_mean(instance.mean4, x, y);
        double c = q->f3(m3), e = q->f4(m4);
        if (c == 0.0 || e == 0.0) return 0.0;
        return std::pow(c, r) * std::pow(e, 1.0 - r);
      },
      tol);
  out.conclusion = integral_conclusion(*q, spec, tol, m, 1.0 - m, r, 1.0 - r);
  return out;
}

bool proven_mean_pair(double alpha, double beta) {
  if (alpha == 1.0 && beta == 1.0) return true;
  if (alpha == -kInf && beta == kInf) return true;
  return alpha >= 0.0 && alpha <= 1.0 && beta >= 0.0 && beta <= 1.0;
}

}  // namespace lsmlab
