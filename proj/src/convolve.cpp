#include "lsmlab/convolve.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "lsmlab/lsm_check.hpp"
#include "lsmlab/parallel.hpp"
#include "lsmlab/random_instances.hpp"

namespace lsmlab {

namespace {

// Dense gather convolution over extents: out[o] = sum_k g[k] f[o - k].
std::vector<double> dense_convolve(const std::vector<std::size_t>& ef,
                                   const std::vector<double>& vf,
                                   const std::vector<std::size_t>& eg,
                                   const std::vector<double>& vg,
                                   std::vector<std::size_t>& eout) {
  const int d = static_cast<int>(ef.size());
  eout.resize(d);
  std::size_t n_out = 1;
  for (int i = 0; i < d; ++i) {
    eout[i] = ef[i] + eg[i] - 1;
    n_out *= eout[i];
  }
  std::vector<std::size_t> sf(d), sg(d);
  sf[d - 1] = sg[d - 1] = 1;
  for (int i = d - 2; i >= 0; --i) {
    sf[i] = sf[i + 1] * ef[i + 1];
    sg[i] = sg[i + 1] * eg[i + 1];
  }
  std::vector<double> out(n_out, 0.0);

  if (d == 2) {
    const std::size_t fr = ef[0], fc = ef[1], gr = eg[0], gc = eg[1];
    const std::size_t oc = eout[1];
    parallel_chunks(eout[0], [&](std::size_t, std::size_t begin, std::size_t end) {
      for (std::size_t oi = begin; oi < end; ++oi) {
        double* orow = &out[oi * oc];
        const std::size_t gi_lo = oi >= fr ? oi - fr + 1 : 0;
        const std::size_t gi_hi = std::min(gr - 1, oi);
        for (std::size_t gi = gi_lo; gi <= gi_hi; ++gi) {
          const double* grow = &vg[gi * gc];
          const double* frow = &vf[(oi - gi) * fc];
          for (std::size_t oj = 0; oj < oc; ++oj) {
            const std::size_t gj_lo = oj >= fc ? oj - fc + 1 : 0;
            const std::size_t gj_hi = std::min(gc - 1, oj);
            double acc = orow[oj];
            for (std::size_t gj = gj_lo; gj <= gj_hi; ++gj)
              acc += grow[gj] * frow[oj - gj];
            orow[oj] = acc;
          }
        }
      }
    });
    return out;
  }

  // Generic d: decode indices, clamp kernel ranges per axis.
  parallel_chunks(n_out, [&](std::size_t, std::size_t begin, std::size_t end) {
    MultiIndex o(d), k(d);
    for (std::size_t flat = begin; flat < end; ++flat) {
      std::size_t rem = flat;
      for (int i = d - 1; i >= 0; --i) {
        o[i] = static_cast<int>(rem % eout[i]);
        rem /= eout[i];
      }
      MultiIndex klo(d), khi(d);
      for (int i = 0; i < d; ++i) {
        klo[i] = std::max(0, o[i] - static_cast<int>(ef[i]) + 1);
        khi[i] = std::min(static_cast<int>(eg[i]) - 1, o[i]);
        if (klo[i] > khi[i]) { klo[0] = 1; khi[0] = 0; break; }  // empty range
      }
      double acc = 0.0;
      k = klo;
      while (k[0] <= khi[0]) {
        std::size_t kf = 0, ff = 0;
        for (int i = 0; i < d; ++i) {
          kf += sg[i] * static_cast<std::size_t>(k[i]);
          ff += sf[i] * static_cast<std::size_t>(o[i] - k[i]);
        }
        acc += vg[kf] * vf[ff];
        int axis = d - 1;
        while (axis >= 0) {
          if (++k[axis] <= khi[axis]) break;
          if (axis == 0) break;
          k[axis] = klo[axis];
          --axis;
        }
        if (axis < 0) break;
      }
      out[flat] = acc;
    }
  });
  return out;
}

}  // namespace

LatticeFunction convolve_lattice(const LatticeFunction& f, const LatticeFunction& g) {
  if (f.dim() != g.dim()) throw std::invalid_argument("convolution dimension mismatch");
  std::vector<std::size_t> eout;
  std::vector<double> vals = dense_convolve(f.box().extents(), f.values(),
                                            g.box().extents(), g.values(), eout);
  MultiIndex lo(f.dim()), hi(f.dim());
  for (int i = 0; i < f.dim(); ++i) {
    lo[i] = f.box().lower[i] + g.box().lower[i];
    hi[i] = f.box().upper[i] + g.box().upper[i];
  }
  for (double& v : vals) v = std::max(v, 0.0);
  return LatticeFunction(std::move(lo), std::move(hi), std::move(vals));
}

GridFunction convolve_grid(const GridFunction& f, const GridFunction& g) {
  if (f.dim() != g.dim()) throw std::invalid_argument("convolution dimension mismatch");
  if (std::abs(f.spacing() - g.spacing()) > 1e-12 * f.spacing())
    throw std::invalid_argument("grid spacing mismatch");
  std::vector<std::size_t> eout;
  std::vector<double> vals = dense_convolve(f.shape(), f.values(), g.shape(), g.values(), eout);
  const double w = std::pow(f.spacing(), f.dim());
  for (double& v : vals) v = std::max(v * w, 0.0);
  std::vector<double> origin(f.dim());
  for (int i = 0; i < f.dim(); ++i) origin[i] = f.origin()[i] + g.origin()[i];
  return GridFunction(std::move(origin), f.spacing(), std::move(eout), std::move(vals));
}

LatticeKernel make_product_kernel(const std::vector<LatticeFunction>& factors) {
  if (factors.empty()) throw std::invalid_argument("product kernel needs factors");
  LatticeKernel out{LatticeFunction::delta(1), {}, true};
  MultiIndex lo, hi;
  std::vector<double> vals{1.0};
  for (const auto& f : factors) {
    if (f.dim() != 1) throw std::invalid_argument("product kernel factors must be 1D");
    CheckReport r = is_log_concave_1d(f, 0.0);
    out.all_factors_log_concave = out.all_factors_log_concave && r.passed;
    out.factor_reports.push_back(std::move(r));
    lo.push_back(f.box().lower[0]);
    hi.push_back(f.box().upper[0]);
    std::vector<double> next;
    next.reserve(vals.size() * f.size());
    for (double v : vals)
      for (double w : f.values()) next.push_back(v * w);
    vals = std::move(next);
  }
  out.kernel = LatticeFunction(std::move(lo), std::move(hi), std::move(vals));
  return out;
}

namespace {

// Effective interval for auditing 1D models.
std::pair<double, double> effective_interval(const DensityModel& m) {
  const auto& fam = m.family();
  if (const auto* g = std::get_if<GaussianModel>(&fam)) {
    double sd = std::sqrt(g->cov[0]);
    return {g->mean[0] - 8.0 * sd, g->mean[0] + 8.0 * sd};
  }
  if (const auto* u = std::get_if<UniformBoxModel>(&fam))
    return {u->box.lower[0], u->box.upper[0]};
  if (const auto* e = std::get_if<ExpPLConcaveModel>(&fam))
    return {e->knot_x.front(), e->knot_x.back()};
  if (const auto* t = std::get_if<TabulatedModel>(&fam)) {
    double lo = t->grid.origin()[0];
    return {lo, lo + t->grid.spacing() * (t->grid.shape()[0] - 1)};
  }
  throw std::invalid_argument("nested product model not supported as kernel factor");
}

}  // namespace

ModelKernel make_product_kernel(const std::vector<DensityModel>& factors) {
  if (factors.empty()) throw std::invalid_argument("product kernel needs factors");
  std::vector<CheckReport> reports;
  bool all = true;
  for (const auto& f : factors) {
    if (f.dim() != 1) throw std::invalid_argument("product kernel factors must be 1D");
    auto [lo, hi] = effective_interval(f);
    const int n = 401;
    std::vector<double> samples(n);
    double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) samples[i] = f(lo + step * i);
    CheckReport r = log_concavity_check(samples, 1e-9);
    all = all && r.passed;
    reports.push_back(std::move(r));
  }
  return ModelKernel{DensityModel::product(factors), std::move(reports), all};
}

DiscretizedKernel discretize_gaussian_kernel(int dim, double eps, double radius) {
  if (!(eps > 0.0)) throw std::invalid_argument("kernel spacing must be positive");
  // Expand until the per-axis truncated mass estimate is below 1e-10.
  double r = radius;
  auto tail = [](double x) { return std::erfc(x / std::sqrt(2.0)); };
  while (dim * tail(r) > 1e-10) r += 0.5;
  const int half = static_cast<int>(std::ceil(r / eps));
  RealBox box{std::vector<double>(dim, -half * eps), std::vector<double>(dim, half * eps)};
  GridFunction g = restrict_to_lattice(DensityModel::standard_gaussian(dim), box, eps);
  return DiscretizedKernel{std::move(g), dim * tail(half * eps)};
}

PreservationReport preservation_check(const LatticeFunction& f, const LatticeFunction& g,
                                      double tol) {
  PreservationReport out;
  out.premise = is_log_supermodular(f, tol);
  out.premise_ok = out.premise.passed;
  if (!out.premise_ok) {
    out.conclusion.note = "premise failed: f is not log-supermodular";
    out.conclusion.passed = false;
    out.passed = false;
    return out;
  }
  out.conclusion = is_log_supermodular(convolve_lattice(f, g), tol);
  out.passed = out.conclusion.passed;
  return out;
}

PreservationReport preservation_check(const GridFunction& f, const GridFunction& g, double tol) {
  PreservationReport out;
  out.premise = is_log_supermodular(f, tol);
  out.premise_ok = out.premise.passed;
  if (!out.premise_ok) {
    out.conclusion.note = "premise failed: f is not log-supermodular";
    out.conclusion.passed = false;
    out.passed = false;
    return out;
  }
  out.conclusion = is_log_supermodular(convolve_grid(f, g), tol);
  out.passed = out.conclusion.passed;
  return out;
}

namespace {

// Core quadruple scan shared by the lattice and grid variants. Points are
// flat indices into a box with the given extents; at(flat difference)
// resolves values with implicit zero outside.
CheckReport quadruple_scan(const std::vector<std::size_t>& ext, const std::vector<double>& vals,
                           double tol, const QuadrupleOptions& opts,
                           const std::function<std::vector<double>(const MultiIndex&,
                                                                   const MultiIndex&)>& to_pair) {
  const int d = static_cast<int>(ext.size());
  std::size_t n = 1;
  for (auto e : ext) n *= e;

  std::vector<std::size_t> stride(d);
  stride[d - 1] = 1;
  for (int i = d - 2; i >= 0; --i) stride[i] = stride[i + 1] * ext[i + 1];

  auto decode = [&](std::size_t flat, MultiIndex& idx) {
    for (int i = d - 1; i >= 0; --i) {
      idx[i] = static_cast<int>(flat % ext[i]);
      flat /= ext[i];
    }
  };
  auto value_at_diff = [&](const MultiIndex& a, const MultiIndex& b) -> double {
    std::size_t flat = 0;
    for (int i = 0; i < d; ++i) {
      int c = a[i] - b[i];
      if (c < 0 || c >= static_cast<int>(ext[i])) return 0.0;
      flat += stride[i] * static_cast<std::size_t>(c);
    }
    return vals[flat];
  };

  double max_v = 0.0;
  for (double v : vals) max_v = std::max(max_v, v);

  CheckReport report;
  report.scale = max_v > 0.0 ? max_v * max_v : 1.0;
  report.tolerance = tol * report.scale;

  double worst = -std::numeric_limits<double>::infinity();
  MultiIndex wx, wy, wu, ww;
  bool have = false;
  std::uint64_t checked = 0;

  MultiIndex x(d), y(d), u(d), w(d), mxy(d), jxy(d), muw(d), juw(d);
  auto consider_quadruple = [&] {
    double lhs = value_at_diff(x, u);
    if (lhs != 0.0) lhs *= value_at_diff(y, w);
    ++checked;
    double cand;
    if (lhs == 0.0) {
      cand = -report.scale;  // trivially satisfied
    } else {
      for (int i = 0; i < d; ++i) {
        mxy[i] = std::min(x[i], y[i]);
        jxy[i] = std::max(x[i], y[i]);
        muw[i] = std::min(u[i], w[i]);
        juw[i] = std::max(u[i], w[i]);
      }
      cand = lhs - value_at_diff(mxy, muw) * value_at_diff(jxy, juw);
    }
    if (!have || cand > worst) {
      worst = cand;
      wx = x; wy = y; wu = u; ww = w;
      have = true;
    }
  };

  const double total_ld = std::pow(static_cast<double>(n), 4);
  if (total_ld <= static_cast<double>(opts.max_quadruples)) {
    for (std::size_t fx = 0; fx < n; ++fx) {
      decode(fx, x);
      for (std::size_t fy = 0; fy < n; ++fy) {
        decode(fy, y);
        for (std::size_t fu = 0; fu < n; ++fu) {
          decode(fu, u);
          for (std::size_t fw = 0; fw < n; ++fw) {
            decode(fw, w);
            consider_quadruple();
          }
        }
      }
    }
    report.note = "exhaustive quadruple enumeration";
  } else {
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::uint64_t t = 0; t < opts.max_quadruples; ++t) {
      decode(pick(rng), x);
      decode(pick(rng), y);
      decode(pick(rng), u);
      decode(pick(rng), w);
      consider_quadruple();
    }
    report.note = "sampled quadruples, seed " + std::to_string(opts.seed);
  }

  report.pairs_checked = checked;
  if (have) {
    report.worst_violation = worst;
    report.witness = {to_pair(wx, wu), to_pair(wy, ww)};
  }
  report.finalize();
  return report;
}

}  // namespace

CheckReport kernel_condition_check(const LatticeFunction& g, double tol,
                                   const QuadrupleOptions& opts) {
  const auto& lo = g.box().lower;
  auto to_pair = [&](const MultiIndex& a, const MultiIndex& b) {
    std::vector<double> p;
    for (std::size_t i = 0; i < a.size(); ++i) p.push_back(lo[i] + a[i]);
    for (std::size_t i = 0; i < b.size(); ++i) p.push_back(lo[i] + b[i]);
    return p;
  };
  return quadruple_scan(g.box().extents(), g.values(), tol, opts, to_pair);
}

CheckReport kernel_condition_check(const GridFunction& g, double tol,
                                   const QuadrupleOptions& opts) {
  auto to_pair = [&](const MultiIndex& a, const MultiIndex& b) {
    std::vector<double> p;
    for (std::size_t i = 0; i < a.size(); ++i) p.push_back(g.origin()[i] + g.spacing() * a[i]);
    for (std::size_t i = 0; i < b.size(); ++i) p.push_back(g.origin()[i] + g.spacing() * b[i]);
    return p;
  };
  return quadruple_scan(g.shape(), g.values(), tol, opts, to_pair);
}

std::optional<Counterexample> counterexample_search(std::uint64_t seed, std::uint64_t trials,
                                                    int extent, KernelDraw draw) {
  std::mt19937_64 rng(seed);
  for (std::uint64_t t = 0; t < trials; ++t) {
    LatticeFunction f = random_lsm_lattice(rng, extent, extent, 0.02);
    LatticeFunction g =
        draw == KernelDraw::general_lsm
            ? random_lsm_lattice(rng, extent, extent, 0.02)
            : random_log_concave_product_kernel(rng, 2).kernel;
    CheckReport r = is_log_supermodular(convolve_lattice(f, g), 1e-12);
    if (!r.passed)
      return Counterexample{std::move(f), std::move(g), std::move(r), t};
  }
  return std::nullopt;
}

}  // namespace lsmlab
