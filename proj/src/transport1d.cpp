#include "lsmlab/transport1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lsmlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTailFraction = 1e-10;
constexpr double kLogFloor = 1e-300;

double xlogx(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

double safe_log(double v) { return std::log(std::max(v, kLogFloor)); }

}  // namespace

Density1D Density1D::from_samples(double lo, double eps, std::vector<double> values,
                                  bool trim_tails) {
  if (!(eps > 0.0)) throw std::invalid_argument("density spacing must be positive");
  if (values.empty()) throw std::invalid_argument("density needs at least one cell");
  double total = 0.0;
  for (double v : values) {
    if (!(v >= 0.0)) throw std::invalid_argument("density values must be nonnegative");
    total += v;
  }
  total *= eps;
  if (!(total > 0.0)) throw std::invalid_argument("density has no mass");

  // Trim tails carrying less than kTailFraction of the mass on each side.
  const double thresh = trim_tails ? kTailFraction * total : -1.0;
  std::size_t a = 0, b = values.size() - 1;
  double acc = 0.0;
  while (a < b && acc + values[a] * eps <= thresh) acc += values[a++] * eps;
  acc = 0.0;
  while (b > a && acc + values[b] * eps <= thresh) acc += values[b--] * eps;

  Density1D out;
  out.eps_ = eps;
  out.lo_ = lo + eps * a;
  out.values_.assign(values.begin() + a, values.begin() + b + 1);
  out.raw_mass_ = total;

  double kept = 0.0;
  for (double v : out.values_) kept += v;
  kept *= eps;
  const double inv = 1.0 / kept;
  out.strictly_positive_ = true;
  for (double& v : out.values_) {
    v *= inv;
    if (v <= 0.0) out.strictly_positive_ = false;
  }
  out.cum_.resize(out.values_.size() + 1);
  out.cum_[0] = 0.0;
  for (std::size_t k = 0; k < out.values_.size(); ++k)
    out.cum_[k + 1] = out.cum_[k] + out.values_[k] * eps;
  out.cum_.back() = 1.0;
  return out;
}

Density1D Density1D::from_function(const std::function<double(double)>& f, double lo, double hi,
                                   double eps) {
  if (!(hi > lo)) throw std::invalid_argument("density interval is empty");
  const std::size_t n = std::max<std::size_t>(2, static_cast<std::size_t>(std::llround((hi - lo) / eps)));
  const double e = (hi - lo) / static_cast<double>(n);
  std::vector<double> vals(n);
  for (std::size_t k = 0; k < n; ++k) vals[k] = f(lo + e * (k + 0.5));
  return from_samples(lo, e, std::move(vals));
}

Density1D Density1D::from_model(const DensityModel& m, double lo, double hi, double eps) {
  if (m.dim() != 1) throw std::invalid_argument("1D density needs a 1D model");
  return from_function([&m](double x) { return m(x); }, lo, hi, eps);
}

Density1D Density1D::from_grid(const GridFunction& g) {
  if (g.dim() != 1) throw std::invalid_argument("1D density needs a 1D grid");
  return from_samples(g.origin()[0] - 0.5 * g.spacing(), g.spacing(), g.values());
}

double Density1D::density(double x) const {
  const double u = (x - lo_) / eps_ - 0.5;  // position in center coordinates
  if (u <= -0.5 || u >= static_cast<double>(cells()) - 0.5) return 0.0;
  if (u <= 0.0) return values_.front();
  if (u >= static_cast<double>(cells()) - 1.0) return values_.back();
  const std::size_t k = static_cast<std::size_t>(u);
  const double frac = u - static_cast<double>(k);
  return values_[k] * (1.0 - frac) + values_[k + 1] * frac;
}

double Density1D::cdf(double x) const {
  if (x <= lo_) return 0.0;
  if (x >= hi()) return 1.0;
  const double u = (x - lo_) / eps_;
  std::size_t k = static_cast<std::size_t>(u);
  if (k >= cells()) k = cells() - 1;
  return cum_[k] + (x - (lo_ + eps_ * k)) * values_[k];
}

double Density1D::inverse_cdf(double q) const {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile must lie in (0, 1)");
  auto it = std::upper_bound(cum_.begin(), cum_.end(), q);
  std::size_t k = static_cast<std::size_t>(it - cum_.begin());
  if (k > 0) --k;
  if (k >= cells()) k = cells() - 1;
  while (k + 1 < cells() && values_[k] <= 0.0 && cum_[k + 1] <= q) ++k;
  const double left = lo_ + eps_ * k;
  if (values_[k] <= 0.0) return left + 0.5 * eps_;
  double x = left + (q - cum_[k]) / values_[k];
  return std::min(std::max(x, left), left + eps_);
}

double Density1D::relative_entropy() const {
  double s = 0.0;
  const std::size_t n = cells();
  for (std::size_t k = 0; k < n; ++k) {
    double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
    s += w * xlogx(values_[k]);
  }
  return s * eps_;
}

GridFunction Density1D::to_grid() const {
  return GridFunction({lo_ + 0.5 * eps_}, eps_, {cells()}, values_);
}

double relative_entropy(const Density1D& nu) { return nu.relative_entropy(); }

std::pair<Density1D, Density1D> to_common_grid(const Density1D& nu1, const Density1D& nu2) {
  const double lo = std::min(nu1.lo(), nu2.lo());
  const double hi = std::max(nu1.hi(), nu2.hi());
  const double eps = std::min(nu1.eps(), nu2.eps());
  const std::size_t n =
      std::max<std::size_t>(2, static_cast<std::size_t>(std::llround((hi - lo) / eps)));
  const double e = (hi - lo) / static_cast<double>(n);
  // No per-density tail trimming here: both outputs must share the grid.
  auto resample = [&](const Density1D& nu) {
    std::vector<double> vals(n);
    for (std::size_t k = 0; k < n; ++k) vals[k] = nu.density(lo + e * (k + 0.5));
    return Density1D::from_samples(lo, e, std::move(vals), /*trim_tails=*/false);
  };
  return {resample(nu1), resample(nu2)};
}

namespace {

void require_common_grid(const Density1D& nu1, const Density1D& nu2) {
  if (nu1.cells() != nu2.cells() || std::abs(nu1.lo() - nu2.lo()) > 1e-12 ||
      std::abs(nu1.eps() - nu2.eps()) > 1e-15)
    throw std::invalid_argument("densities must live on a common grid (see to_common_grid)");
}

}  // namespace

double transport_value(const Density1D& nu1, const Density1D& nu2, double x) {
  double q = nu1.cdf(x);
  const double qmin = 1e-14;
  q = std::min(std::max(q, qmin), 1.0 - qmin);
  return nu2.inverse_cdf(q);
}

TransportMap1D monotone_map(const Density1D& nu1, const Density1D& nu2, std::size_t points) {
  if (points < 2) throw std::invalid_argument("transport map needs at least 2 sample points");
  TransportMap1D map;
  map.x.resize(points);
  map.t.resize(points);
  map.t_prime.resize(points);
  for (std::size_t j = 0; j < points; ++j) {
    const double q = (static_cast<double>(j) + 0.5) / static_cast<double>(points);
    const double x = nu1.inverse_cdf(q);
    const double t = nu2.inverse_cdf(q);
    map.x[j] = x;
    map.t[j] = t;
    map.t_prime[j] = nu1.density(x) / std::max(nu2.density(t), kLogFloor);
  }
  return map;
}

namespace {

// Which density feeds a point of the assembled min/max pushforwards.
enum class MixBranch { first, second, min_side, max_side };

struct Crossing {
  std::size_t cell;
  double location;
  bool left_in_a;  // sign of T - id at the left edge
};

struct MinMaxContext {
  const Density1D* nu1;
  const Density1D* nu2;
  std::vector<char> center_in_a;  // x <= T(x) at cell centers
  std::vector<Crossing> crossings;

  bool in_a(double x) const { return transport_value(*nu1, *nu2, x) >= x; }
};

MinMaxContext make_minmax_context(const Density1D& nu1, const Density1D& nu2) {
  require_common_grid(nu1, nu2);
  MinMaxContext ctx;
  ctx.nu1 = &nu1;
  ctx.nu2 = &nu2;
  const std::size_t n = nu1.cells();
  ctx.center_in_a.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    ctx.center_in_a[k] = ctx.in_a(nu1.center(k)) ? 1 : 0;

  auto sign_at = [&](double x) { return ctx.in_a(x); };
  for (std::size_t k = 0; k < n; ++k) {
    double l = nu1.lo() + nu1.eps() * k;
    double r = l + nu1.eps();
    bool sl = sign_at(l), sr = sign_at(r);
    if (sl == sr) continue;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (l + r);
      if (sign_at(mid) == sl)
        l = mid;
      else
        r = mid;
    }
    ctx.crossings.push_back({k, 0.5 * (l + r), sl});
  }
  return ctx;
}

// Integral of phi(branch value) over the grid with trapezoid weights,
// splitting cells at sign crossings of T - id. With branch == first this
// is exactly the quadrature used for H(nu1), so ordered pairs give
// bitwise-equal entropy sums.
double entropy_mix(const MinMaxContext& ctx, MixBranch branch) {
  const Density1D& nu1 = *ctx.nu1;
  const Density1D& nu2 = *ctx.nu2;
  const std::size_t n = nu1.cells();
  const double eps = nu1.eps();

  auto pick = [&](bool in_a, std::size_t k) {
    switch (branch) {
      case MixBranch::first: return nu1.value(k);
      case MixBranch::second: return nu2.value(k);
      case MixBranch::min_side: return in_a ? nu1.value(k) : nu2.value(k);
      case MixBranch::max_side: return in_a ? nu2.value(k) : nu1.value(k);
    }
    return 0.0;
  };

  std::vector<const Crossing*> by_cell(n, nullptr);
  if (branch == MixBranch::min_side || branch == MixBranch::max_side)
    for (const auto& c : ctx.crossings) by_cell[c.cell] = &c;

  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
    const Crossing* c = by_cell[k];
    double contribution;
    if (c == nullptr) {
      contribution = xlogx(pick(ctx.center_in_a[k] != 0, k));
    } else {
      const double l = nu1.lo() + eps * k;
      const double theta = (c->location - l) / eps;
      contribution = theta * xlogx(pick(c->left_in_a, k)) +
                     (1.0 - theta) * xlogx(pick(!c->left_in_a, k));
    }
    s += w * contribution;
  }
  return s * eps;
}

}  // namespace

std::pair<Density1D, Density1D> minmax_pushforward(const Density1D& nu1, const Density1D& nu2) {
  MinMaxContext ctx = make_minmax_context(nu1, nu2);
  const std::size_t n = nu1.cells();
  std::vector<double> vminus(n), vplus(n);
  std::vector<const Crossing*> by_cell(n, nullptr);
  for (const auto& c : ctx.crossings) by_cell[c.cell] = &c;
  for (std::size_t k = 0; k < n; ++k) {
    const Crossing* c = by_cell[k];
    if (c == nullptr) {
      bool a = ctx.center_in_a[k] != 0;
      vminus[k] = a ? nu1.value(k) : nu2.value(k);
      vplus[k] = a ? nu2.value(k) : nu1.value(k);
    } else {
      const double theta = (c->location - (nu1.lo() + nu1.eps() * k)) / nu1.eps();
      auto mix = [&](double left, double right) { return theta * left + (1.0 - theta) * right; };
      double n1 = nu1.value(k), n2 = nu2.value(k);
      vminus[k] = c->left_in_a ? mix(n1, n2) : mix(n2, n1);
      vplus[k] = c->left_in_a ? mix(n2, n1) : mix(n1, n2);
    }
  }
  // The inputs are already truncated; keep their working interval.
  return {Density1D::from_samples(nu1.lo(), nu1.eps(), std::move(vminus), false),
          Density1D::from_samples(nu1.lo(), nu1.eps(), std::move(vplus), false)};
}

namespace {

struct MeanPath {
  double value;
  double deriv;
};

// Value and derivative of x -> M_alpha^s(x, t(x)) given t and t'.
// Computed in log space so large |alpha| stays finite.
MeanPath mean_path(double alpha, double s, double x, double t, double tp) {
  if (s == 1.0) return {x, 1.0};
  if (s == 0.0) return {t, tp};
  if (alpha == 1.0) return {s * x + (1.0 - s) * t, s + (1.0 - s) * tp};
  if (alpha == kInf) return t >= x ? MeanPath{t, tp} : MeanPath{x, 1.0};
  if (alpha == -kInf) return t <= x ? MeanPath{t, tp} : MeanPath{x, 1.0};
  if (!(x > 0.0 && t > 0.0))
    throw std::invalid_argument("generalized mean path requires positive support");
  if (alpha == 0.0) {
    double v = std::exp(s * std::log(x) + (1.0 - s) * std::log(t));
    return {v, v * (s / x + (1.0 - s) * tp / t)};
  }
  const double u = alpha * std::log(x), v = alpha * std::log(t);
  const double lu = std::log(s) + u, lv = std::log(1.0 - s) + v;
  const double mx = std::max(lu, lv);
  const double eu = std::exp(lu - mx), ev = std::exp(lv - mx);
  const double den = eu + ev;
  const double value = std::exp((mx + std::log(den)) / alpha);
  const double num = eu / x + ev * (tp / t);
  return {value, value * num / den};
}

}  // namespace

MeanPushforward mean_pushforward(const Density1D& nu1, const Density1D& nu2,
                                 const MeanSpec& spec, std::size_t points) {
  if (!(spec.lambda >= 0.0 && spec.lambda <= 1.0))
    throw std::invalid_argument("mean weight must lie in [0, 1]");
  if (spec.alpha <= 0.0 && spec.alpha != -kInf && (nu1.lo() <= 0.0 || nu2.lo() <= 0.0))
    throw std::invalid_argument("alpha <= 0 requires supports in (0, inf)");

  MeanPushforward out;
  TransportMap1D map = monotone_map(nu1, nu2, points);
  out.x = map.x;
  out.h.resize(points);
  out.h_prime.resize(points);
  std::vector<double> dens(points);
  for (std::size_t j = 0; j < points; ++j) {
    MeanPath p = mean_path(spec.alpha, spec.lambda, map.x[j], map.t[j], map.t_prime[j]);
    out.h[j] = p.value;
    out.h_prime[j] = p.deriv;
    dens[j] = nu1.density(map.x[j]) / std::max(p.deriv, kLogFloor);
  }
  for (std::size_t j = 1; j < points; ++j) {
    if (!(out.h[j] > out.h[j - 1])) {
      throw std::runtime_error(
          "mean pushforward aborted: H is not increasing near x = " + std::to_string(out.x[j]) +
          " (H[j-1] = " + std::to_string(out.h[j - 1]) + ", H[j] = " + std::to_string(out.h[j]) +
          ")");
    }
  }

  // Resample the curve (h, dens) onto a uniform grid.
  const double lo = out.h.front(), hi = out.h.back();
  const double eps = nu1.eps();
  const std::size_t n = std::max<std::size_t>(2, static_cast<std::size_t>((hi - lo) / eps));
  const double e = (hi - lo) / static_cast<double>(n);
  std::vector<double> vals(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double y = lo + e * (k + 0.5);
    auto it = std::upper_bound(out.h.begin(), out.h.end(), y);
    std::size_t j = static_cast<std::size_t>(it - out.h.begin());
    if (j == 0) j = 1;
    if (j >= points) j = points - 1;
    const double frac = (y - out.h[j - 1]) / (out.h[j] - out.h[j - 1]);
    vals[k] = std::max(0.0, dens[j - 1] * (1.0 - frac) + dens[j] * frac);
  }
  out.density = Density1D::from_samples(lo, e, std::move(vals));
  return out;
}

DisplacementDetail displacement_convexity_detail(const Density1D& nu1, const Density1D& nu2,
                                                 double tol) {
  MinMaxContext ctx = make_minmax_context(nu1, nu2);
  DisplacementDetail out;
  out.entropy_1 = entropy_mix(ctx, MixBranch::first);
  out.entropy_2 = entropy_mix(ctx, MixBranch::second);
  out.entropy_minus = entropy_mix(ctx, MixBranch::min_side);
  out.entropy_plus = entropy_mix(ctx, MixBranch::max_side);

  // The transport integral collapsing to integral n1 = 1 in the proof,
  // evaluated through the assembled densities' defining indicator form.
  auto n_minus = [&](double z) {
    return ctx.in_a(z) ? nu1.density(z) : nu2.density(z);
  };
  auto n_plus = [&](double z) {
    return ctx.in_a(z) ? nu2.density(z) : nu1.density(z);
  };
  double mass = 0.0;
  for (std::size_t k = 0; k < nu1.cells(); ++k) {
    const double x = nu1.center(k);
    const double t = transport_value(nu1, nu2, x);
    const double zmin = std::min(x, t), zmax = std::max(x, t);
    mass += n_minus(zmin) * n_plus(zmax) / std::max(nu2.density(t), kLogFloor);
  }
  out.mass_identity = mass * nu1.eps();

  CheckReport& r = out.report;
  r.scale = 1.0;
  r.tolerance = tol;
  r.worst_violation = (out.entropy_minus + out.entropy_plus) - (out.entropy_1 + out.entropy_2);
  r.pairs_checked = nu1.cells();
  r.finalize();
  return out;
}

CheckReport displacement_convexity_check(const Density1D& nu1, const Density1D& nu2, double tol) {
  DisplacementDetail d = displacement_convexity_detail(nu1, nu2, tol);
  auto [minus, plus] = minmax_pushforward(nu1, nu2);
  CheckReport r = d.report;
  r.note = "mass_identity " + std::to_string(d.mass_identity) + ", raw masses " +
           std::to_string(minus.raw_mass()) + " / " + std::to_string(plus.raw_mass());
  return r;
}

CheckReport derivative_bound_check(const Density1D& nu1, const Density1D& nu2, double alpha,
                                   double s, double tol, std::size_t points) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("derivative bound needs alpha in (0, 1]");
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("derivative bound needs s in (0, 1)");
  if (nu1.lo() <= 0.0 || nu2.lo() <= 0.0)
    throw std::invalid_argument("derivative bound needs supports in (0, inf)");

  TransportMap1D map = monotone_map(nu1, nu2, points);
  CheckReport r;
  r.scale = 1.0;
  r.tolerance = tol;
  double worst = -kInf;
  double wx = map.x.front();
  for (std::size_t j = 0; j < points; ++j) {
    MeanPath p = mean_path(alpha, s, map.x[j], map.t[j], map.t_prime[j]);
    const double bound = std::pow(map.t_prime[j], 1.0 - s);
    const double cand = bound - p.deriv;
    if (cand > worst) {
      worst = cand;
      wx = map.x[j];
    }
  }
  r.worst_violation = worst;
  r.pairs_checked = points;
  r.witness = {{wx}};
  r.finalize();
  return r;
}

DualityReport log_laplace_duality_check(const std::function<double(double)>& f, double lo,
                                        double hi, double eps,
                                        const std::vector<Density1D>& candidates, double tol) {
  if (!(hi > lo)) throw std::invalid_argument("duality interval is empty");
  const std::size_t n = std::max<std::size_t>(2, static_cast<std::size_t>(std::llround((hi - lo) / eps)));
  const double e = (hi - lo) / static_cast<double>(n);
  std::vector<double> fv(n);
  double fmax = -kInf;
  for (std::size_t k = 0; k < n; ++k) {
    fv[k] = f(lo + e * (k + 0.5));
    fmax = std::max(fmax, fv[k]);
  }
  double z = 0.0;
  for (double v : fv) z += std::exp(v - fmax);
  DualityReport out;
  out.log_integral = std::log(z * e) + fmax;
  out.tolerance = tol;
  out.passed = true;

  auto functional = [&](const Density1D& nu) {
    double s = 0.0;
    for (std::size_t k = 0; k < nu.cells(); ++k) s += nu.value(k) * f(nu.center(k));
    return s * nu.eps() - nu.relative_entropy();
  };

  for (const auto& nu : candidates) {
    DualityEntry entry;
    entry.functional = functional(nu);
    entry.gap = out.log_integral - entry.functional;
    if (entry.gap < -tol) out.passed = false;
    out.candidates.push_back(entry);
  }

  std::vector<double> gibbs_vals(n);
  for (std::size_t k = 0; k < n; ++k) gibbs_vals[k] = std::exp(fv[k] - fmax);
  Density1D gibbs = Density1D::from_samples(lo, e, std::move(gibbs_vals));
  out.gibbs_gap = out.log_integral - functional(gibbs);
  if (std::abs(out.gibbs_gap) > tol) out.passed = false;
  return out;
}

TransportChainReport transport_fourfn_audit(
    const std::array<std::function<double(double)>, 4>& f, const Density1D& nu1,
    const Density1D& nu2, const MeanSpec& mean3, const MeanSpec& mean4, double r,
    bool minmax_mode, double tol) {
  require_common_grid(nu1, nu2);
  TransportChainReport out;
  out.tolerance = tol;
  const double s = mean3.lambda, t = mean4.lambda;
  const double m = minmax_mode ? 0.5 : s * r + (1.0 - r) * t;
  if (minmax_mode) r = 0.5;
  out.m = m;

  const std::size_t n = nu1.cells();
  const double eps = nu1.eps();

  // Per-cell transport data.
  std::vector<double> tx(n), h3(n), h4(n), h3p(n), h4p(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = nu1.center(k);
    const double tv = transport_value(nu1, nu2, x);
    const double tp = nu1.density(x) / std::max(nu2.density(tv), kLogFloor);
    tx[k] = tv;
    MeanPath p3 = minmax_mode ? MeanPath{std::min(x, tv), 0.0}
                              : mean_path(mean3.alpha, s, x, tv, tp);
    MeanPath p4 = minmax_mode ? MeanPath{std::max(x, tv), 0.0}
                              : mean_path(mean4.alpha, t, x, tv, tp);
    h3[k] = p3.value;
    h4[k] = p4.value;
    h3p[k] = p3.deriv;
    h4p[k] = p4.deriv;
  }

  // Coupling step: expectation of the log hypothesis under pi.
  double lhs_coupling = 0.0, rhs_coupling = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = nu1.value(k) * eps;
    if (w == 0.0) continue;
    const double x = nu1.center(k);
    lhs_coupling += w * (m * safe_log(f[0](x)) + (1.0 - m) * safe_log(f[1](tx[k])));
    rhs_coupling += w * (r * safe_log(f[2](h3[k])) + (1.0 - r) * safe_log(f[3](h4[k])));
  }
  out.coupling_slack = rhs_coupling - lhs_coupling;

  // Entropy step.
  const double h_nu1 = nu1.relative_entropy();
  const double h_nu2 = nu2.relative_entropy();
  double h_nu3, h_nu4;
  if (minmax_mode) {
    MinMaxContext ctx = make_minmax_context(nu1, nu2);
    h_nu3 = entropy_mix(ctx, MixBranch::min_side);
    h_nu4 = entropy_mix(ctx, MixBranch::max_side);
  } else {
    // H(nu_i | lambda) = integral log(n1 / H_i') dnu1 along the map.
    double s3 = 0.0, s4 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
      const double mass = w * nu1.value(k) * eps;
      if (mass == 0.0) continue;
      const double ln1 = safe_log(nu1.value(k));
      s3 += mass * (ln1 - safe_log(h3p[k]));
      s4 += mass * (ln1 - safe_log(h4p[k]));
    }
    h_nu3 = s3;
    h_nu4 = s4;
  }
  out.entropy_slack = (m * h_nu1 + (1.0 - m) * h_nu2) - (r * h_nu3 + (1.0 - r) * h_nu4);

  // Duality step, one gap per function.
  const double lo = nu1.lo();
  auto log_integral = [&](const std::function<double(double)>& fn) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += fn(lo + eps * (k + 0.5));
    return std::log(std::max(acc * eps, kLogFloor));
  };
  auto expect_log = [&](const std::function<double(double)>& fn,
                        const std::vector<double>* points) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double w = nu1.value(k) * eps;
      if (w == 0.0) continue;
      acc += w * safe_log(fn(points ? (*points)[k] : nu1.center(k)));
    }
    return acc;
  };
  const double li1 = log_integral(f[0]);
  const double li2 = log_integral(f[1]);
  const double li3 = log_integral(f[2]);
  const double li4 = log_integral(f[3]);
  // integral log f2 dnu2 = integral log f2(T) dnu1, and similarly nu3/nu4
  // integrate through the coupling.
  double e1 = expect_log(f[0], nullptr);
  double e2 = expect_log(f[1], &tx);
  double e3 = expect_log(f[2], &h3);
  double e4 = expect_log(f[3], &h4);
  out.duality_gaps[0] = li1 - (e1 - h_nu1);
  out.duality_gaps[1] = li2 - (e2 - h_nu2);
  out.duality_gaps[2] = li3 - (e3 - h_nu3);
  out.duality_gaps[3] = li4 - (e4 - h_nu4);

  out.conclusion_slack = (r * li3 + (1.0 - r) * li4) - (m * li1 + (1.0 - m) * li2);

  out.passed = out.coupling_slack >= -tol && out.entropy_slack >= -tol &&
               out.conclusion_slack >= -tol;
  for (double g : out.duality_gaps)
    if (g < -tol) out.passed = false;
  return out;
}

}  // namespace lsmlab
