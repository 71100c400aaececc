#include "lsmlab/random_instances.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lsmlab {

namespace {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Normalizes a potential to max 0 and exponentiates.
std::vector<double> exp_normalized(std::vector<double> potential) {
  double mx = *std::max_element(potential.begin(), potential.end());
  for (double& v : potential) v = std::exp(v - mx);
  return potential;
}

}  // namespace

LatticeFunction random_lsm_lattice(Rng& rng, int rows, int cols, double margin) {
  return random_lsm_lattice_d(rng, {rows, cols}, margin);
}

LatticeFunction random_lsm_lattice_d(Rng& rng, const std::vector<int>& extents, double margin) {
  const int d = static_cast<int>(extents.size());
  if (d != 2 && d != 3) throw std::invalid_argument("random LSM generator supports d = 2, 3");
  std::size_t n = 1;
  for (int e : extents) {
    if (e < 2) throw std::invalid_argument("extent must be >= 2");
    n *= static_cast<std::size_t>(e);
  }
  std::vector<double> pot(n);
  for (double& v : pot) v = uniform(rng, -1.0, 1.0);

  std::vector<std::size_t> stride(d);
  stride[d - 1] = 1;
  for (int i = d - 2; i >= 0; --i) stride[i] = stride[i + 1] * extents[i + 1];

  // Smallest adjacent minor over all axis pairs; adding c * sum_{i<j} xi xj
  // raises every minor by exactly c.
  double min_minor = 0.0;
  MultiIndex idx(d, 0);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t rem = flat;
    for (int i = d - 1; i >= 0; --i) {
      idx[i] = static_cast<int>(rem % extents[i]);
      rem /= extents[i];
    }
    for (int i = 0; i < d; ++i) {
      if (idx[i] + 1 >= extents[i]) continue;
      for (int j = i + 1; j < d; ++j) {
        if (idx[j] + 1 >= extents[j]) continue;
        double minor = pot[flat] + pot[flat + stride[i] + stride[j]] - pot[flat + stride[i]] -
                       pot[flat + stride[j]];
        min_minor = std::min(min_minor, minor);
      }
    }
  }
  const double c = -min_minor + margin * uniform(rng, 0.0, 1.0);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t rem = flat;
    double cross = 0.0;
    for (int i = d - 1; i >= 0; --i) {
      idx[i] = static_cast<int>(rem % extents[i]);
      rem /= extents[i];
    }
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) cross += static_cast<double>(idx[i]) * idx[j];
    pot[flat] += c * cross;
  }
  MultiIndex hi(d);
  for (int i = 0; i < d; ++i) hi[i] = extents[i] - 1;
  return LatticeFunction(MultiIndex(d, 0), std::move(hi), exp_normalized(std::move(pot)));
}

LatticeKernel random_log_concave_product_kernel(Rng& rng, int dim) {
  std::vector<LatticeFunction> factors;
  for (int axis = 0; axis < dim; ++axis) {
    const int kind = uniform_int(rng, 0, 3);
    std::vector<double> vals;
    switch (kind) {
      case 0: {  // binomial weights C(n, k)
        const int n = uniform_int(rng, 2, 5);
        vals.assign(n + 1, 1.0);
        for (int k = 1; k <= n; ++k) vals[k] = vals[k - 1] * (n - k + 1) / k;
        break;
      }
      case 1: {  // one-sided geometric
        const int len = uniform_int(rng, 3, 6);
        const double ratio = uniform(rng, 0.3, 0.9);
        vals.resize(len);
        vals[0] = 1.0;
        for (int k = 1; k < len; ++k) vals[k] = vals[k - 1] * ratio;
        break;
      }
      case 2: {  // two-sided geometric
        const int half = uniform_int(rng, 1, 3);
        const double ratio = uniform(rng, 0.3, 0.9);
        vals.resize(2 * half + 1);
        for (int k = -half; k <= half; ++k) vals[k + half] = std::pow(ratio, std::abs(k));
        break;
      }
      default: {  // discretized Gaussian
        const int half = uniform_int(rng, 1, 3);
        const double sd = uniform(rng, 0.7, 2.0);
        vals.resize(2 * half + 1);
        for (int k = -half; k <= half; ++k) vals[k + half] = std::exp(-k * k / (2.0 * sd * sd));
        break;
      }
    }
    const int lo = uniform_int(rng, -1, 1);
    factors.emplace_back(MultiIndex{lo}, MultiIndex{lo + static_cast<int>(vals.size()) - 1},
                         std::move(vals));
  }
  return make_product_kernel(factors);
}

LatticeFunction random_nonproduct_lsm_kernel(Rng& rng, int extent) {
  const double c = uniform(rng, 0.2, 0.8);
  std::vector<double> a1(extent), a2(extent);
  for (double& v : a1) v = uniform(rng, -0.5, 0.5);
  for (double& v : a2) v = uniform(rng, -0.5, 0.5);
  std::vector<double> pot(static_cast<std::size_t>(extent) * extent);
  for (int i = 0; i < extent; ++i)
    for (int j = 0; j < extent; ++j)
      pot[static_cast<std::size_t>(i) * extent + j] = a1[i] + a2[j] + c * i * j;
  return LatticeFunction(MultiIndex{0, 0}, MultiIndex{extent - 1, extent - 1},
                         exp_normalized(std::move(pot)));
}

GridFunction random_grid_lsm_density(Rng& rng, const RealBox& box, double eps) {
  if (box.dim() != 2) throw std::invalid_argument("grid LSM generator is 2D");
  const double b1 = uniform(rng, 0.15, 0.5);
  const double b2 = uniform(rng, 0.15, 0.5);
  const double c = uniform(rng, 0.05, 0.3);
  const double m1 = uniform(rng, -1.0, 1.0);
  const double m2 = uniform(rng, -1.0, 1.0);
  const double l1 = uniform(rng, -0.3, 0.3);
  const double l2 = uniform(rng, -0.3, 0.3);

  std::vector<std::size_t> shape(2);
  for (int i = 0; i < 2; ++i)
    shape[i] = static_cast<std::size_t>(std::floor((box.upper[i] - box.lower[i]) / eps + 1e-9)) + 1;
  std::vector<double> pot(shape[0] * shape[1]);
  for (std::size_t i = 0; i < shape[0]; ++i) {
    const double x = box.lower[0] + eps * i;
    for (std::size_t j = 0; j < shape[1]; ++j) {
      const double y = box.lower[1] + eps * j;
      pot[i * shape[1] + j] =
          -b1 * (x - m1) * (x - m1) - b2 * (y - m2) * (y - m2) + c * x * y + l1 * x + l2 * y;
    }
  }
  return GridFunction({box.lower[0], box.lower[1]}, eps, std::move(shape),
                      exp_normalized(std::move(pot)));
}

GridFunction random_positive_grid(Rng& rng, const std::vector<std::size_t>& shape, double eps) {
  std::size_t n = 1;
  for (auto s : shape) n *= s;
  std::vector<double> vals(n);
  for (double& v : vals) v = std::exp(uniform(rng, -2.0, 2.0));
  return GridFunction(std::vector<double>(shape.size(), 0.0), eps,
                      std::vector<std::size_t>(shape), std::move(vals));
}

Density1D random_density_1d(Rng& rng, double lo, double hi, double eps) {
  const int kind = uniform_int(rng, 0, 3);
  const double span = hi - lo;
  const double c = lo + 0.5 * span;
  auto gauss = [](double x, double mu, double sd) {
    const double z = (x - mu) / sd;
    return std::exp(-0.5 * z * z) / sd;
  };
  double m1 = c + uniform(rng, -0.2, 0.2) * span;
  double m2 = c + uniform(rng, -0.25, 0.25) * span;
  double s1 = uniform(rng, 0.04, 0.12) * span;
  double s2 = uniform(rng, 0.05, 0.2) * span;
  double w = uniform(rng, 0.2, 0.8);
  std::function<double(double)> f;
  switch (kind) {
    case 0:  // single Gaussian
      f = [=](double x) { return gauss(x, m1, s1); };
      break;
    case 1:  // bimodal mixture
      f = [=](double x) { return w * gauss(x, m1, s1) + (1.0 - w) * gauss(x, m2, s2); };
      break;
    case 2:  // skewed: two scales glued at the mode
      f = [=](double x) { return x < m1 ? gauss(x, m1, s1) : gauss(x, m1, s2); };
      break;
    default:  // heavy-shouldered: narrow core plus a wide pedestal
      f = [=](double x) { return gauss(x, m1, s1) + 0.15 * gauss(x, c, 0.35 * span); };
      break;
  }
  // Background floor keeps the density strictly positive on the interval.
  auto floored = [=](double x) { return f(x) + 1e-8; };
  return Density1D::from_function(floored, lo, hi, eps);
}

std::pair<Density1D, Density1D> random_density_pair(Rng& rng, bool positive_support) {
  const double lo = positive_support ? 0.5 : -8.0;
  const double hi = positive_support ? 9.5 : 8.0;
  const double eps = (hi - lo) / 8192.0;
  Density1D a = random_density_1d(rng, lo, hi, eps);
  Density1D b = random_density_1d(rng, lo, hi, eps);
  return to_common_grid(a, b);
}

DensityModel random_log_concave_model_1d(Rng& rng) {
  if (uniform_int(rng, 0, 1) == 0)
    return DensityModel::gaussian1d(uniform(rng, -1.0, 1.0), uniform(rng, 0.3, 2.0));
  // Random concave piecewise-linear potential.
  const int pieces = uniform_int(rng, 2, 5);
  std::vector<double> xs(pieces + 1), phis(pieces + 1);
  double x = uniform(rng, -4.0, -2.0);
  double phi = uniform(rng, -2.0, 0.0);
  double slope = uniform(rng, 0.5, 2.5);
  for (int i = 0; i <= pieces; ++i) {
    xs[i] = x;
    phis[i] = phi;
    const double step = uniform(rng, 0.8, 2.0);
    x += step;
    phi += slope * step;
    slope -= uniform(rng, 0.3, 1.2);  // strictly decreasing slopes
  }
  return DensityModel::exp_pl_concave(std::move(xs), std::move(phis));
}

DensityModel random_decreasing_log_concave_model(Rng& rng, double x_max) {
  const int pieces = uniform_int(rng, 2, 5);
  std::vector<double> xs(pieces + 1), phis(pieces + 1);
  double x = 1e-6;
  double phi = 0.0;
  double slope = -uniform(rng, 0.05, 0.4);
  const double step = (x_max - x) / pieces;
  for (int i = 0; i <= pieces; ++i) {
    xs[i] = x;
    phis[i] = phi;
    phi += slope * step;
    x += step;
    slope -= uniform(rng, 0.1, 0.8);
  }
  return DensityModel::exp_pl_concave(std::move(xs), std::move(phis));
}

LatticeQuad random_ad_quad(Rng& rng, int max_extent) {
  const int rows = uniform_int(rng, 2, max_extent);
  const int cols = uniform_int(rng, 2, max_extent);
  LatticeFunction mu = random_lsm_lattice(rng, rows, cols, 0.3);
  const int kind = uniform_int(rng, 0, 2);
  if (kind == 0) {  // FKG: all four coincide
    return LatticeQuad{mu, mu, mu, mu};
  }
  if (kind == 1) {  // masked: f1 = a mu, f2 = b mu with masks in [0, 0.95]
    std::vector<double> v1 = mu.values(), v2 = mu.values();
    for (double& v : v1) v *= uniform(rng, 0.0, 0.95);
    for (double& v : v2) v *= uniform(rng, 0.0, 0.95);
    LatticeFunction f1(mu.box().lower, mu.box().upper, std::move(v1));
    LatticeFunction f2(mu.box().lower, mu.box().upper, std::move(v2));
    return LatticeQuad{std::move(f1), std::move(f2), mu, mu};
  }
  // Constant-top: arbitrary f1, f2 below M, f3 = f4 = M.
  const double top = uniform(rng, 0.5, 2.0);
  std::vector<double> v1(mu.size()), v2(mu.size()), vt(mu.size(), top);
  for (double& v : v1) v = uniform(rng, 0.0, top);
  for (double& v : v2) v = uniform(rng, 0.0, top);
  LatticeFunction f1(mu.box().lower, mu.box().upper, std::move(v1));
  LatticeFunction f2(mu.box().lower, mu.box().upper, std::move(v2));
  LatticeFunction f3(mu.box().lower, mu.box().upper, std::move(vt));
  return LatticeQuad{std::move(f1), std::move(f2), f3, f3};
}

FourFnInstance random_general_pl_instance(Rng& rng, bool near_three_function) {
  FourFnInstance inst;
  const double r = near_three_function ? 0.01 : uniform(rng, 0.15, 0.85);
  double s, t;
  if (!near_three_function && uniform_int(rng, 0, 1) == 0) {
    // The r = 1/2, s = 1 - t reduction that recovers the unified theorem.
    inst.r = 0.5;
    t = uniform(rng, 0.2, 0.8);
    s = 1.0 - t;
  } else {
    inst.r = r;
    s = uniform(rng, 0.2, 0.8);
    t = uniform(rng, 0.2, 0.8);
  }
  inst.m = s * inst.r + (1.0 - inst.r) * t;
  inst.mean3 = MeanSpec{uniform(rng, 0.0, 1.0), s};
  inst.mean4 = MeanSpec{uniform(rng, 0.0, 1.0), t};

  DensityModel base = random_decreasing_log_concave_model(rng);
  auto scaled = [&](double factor) {
    const auto& pl = std::get<ExpPLConcaveModel>(base.family());
    std::vector<double> phis = pl.knot_phi;
    const double shift = std::log(factor);
    for (double& v : phis) v += shift;
    return DensityModel::exp_pl_concave(pl.knot_x, std::move(phis));
  };
  const double a1 = uniform(rng, 0.3, 1.0);
  const double a2 = uniform(rng, 0.3, 1.0);
  const double a3 = uniform(rng, 1.0, 2.5);
  const double a4 = uniform(rng, 1.0, 2.5);
  inst.functions = ModelQuad{scaled(a1), scaled(a2), scaled(a3), scaled(a4)};
  return inst;
}

}  // namespace lsmlab
