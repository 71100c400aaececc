#include "lsmlab/entropy_epi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lsmlab/lsm_check.hpp"
#include "lsmlab/parallel.hpp"

namespace lsmlab {

namespace {

constexpr double kLogFloor = 1e-300;

double xlogx(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

void validate_flow(const FlowParams& p) {
  if (!(p.lambda > 0.0 && p.lambda < 1.0))
    throw std::invalid_argument("flow lambda must lie in (0, 1)");
  if (!(p.s_max > 0.0)) throw std::invalid_argument("flow s_max must be positive");
  if (p.nodes < 2) throw std::invalid_argument("flow needs at least 2 nodes");
}

}  // namespace

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton on P_n with the Chebyshev initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
    nodes[i] = xm - xl * x;
    nodes[n - 1 - i] = xm + xl * x;
    weights[i] = 2.0 * xl / ((1.0 - x * x) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

JointDensity2D JointDensity2D::from_grid(GridFunction grid) {
  if (grid.dim() != 2) throw std::invalid_argument("joint density must be 2D");
  JointDensity2D out(std::move(grid));
  out.raw_mass_ = out.grid_.integral();
  if (!(out.raw_mass_ > 0.0)) throw std::invalid_argument("joint density has no mass");
  const double inv = 1.0 / out.raw_mass_;
  for (double& v : out.grid_.values()) v *= inv;

  const double eps = out.grid_.spacing();
  const auto& sh = out.grid_.shape();
  double moment = 0.0;
  for (std::size_t i = 0; i < sh[0]; ++i) {
    const double x = out.grid_.origin()[0] + eps * i;
    for (std::size_t j = 0; j < sh[1]; ++j) {
      const double y = out.grid_.origin()[1] + eps * j;
      moment += out.grid_.values()[i * sh[1] + j] * (x * x + y * y);
    }
  }
  out.second_moment_ = moment * eps * eps;
  return out;
}

JointDensity2D JointDensity2D::gaussian(double rho, double radius, double eps) {
  if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("|rho| must be < 1");
  const double det = 1.0 - rho * rho;
  const double norm = 1.0 / (2.0 * std::numbers::pi * std::sqrt(det));
  const std::size_t n = static_cast<std::size_t>(std::llround(2.0 * radius / eps));
  std::vector<double> vals(n * n);
  const double o = -radius + 0.5 * eps;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = o + eps * i;
    for (std::size_t j = 0; j < n; ++j) {
      const double y = o + eps * j;
      vals[i * n + j] = norm * std::exp(-(x * x - 2.0 * rho * x * y + y * y) / (2.0 * det));
    }
  }
  GridFunction g({o, o}, eps, {n, n}, std::move(vals));
  const double mass = g.integral();
  if (std::abs(mass - 1.0) > 1e-3)
    throw std::invalid_argument("grid cannot carry this density (mass " +
                                std::to_string(mass) + "); refine eps or widen the box");
  return from_grid(std::move(g));
}

GridFunction JointDensity2D::marginal_x() const {
  const auto& sh = grid_.shape();
  std::vector<double> vals(sh[0], 0.0);
  for (std::size_t i = 0; i < sh[0]; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < sh[1]; ++j) s += grid_.values()[i * sh[1] + j];
    vals[i] = s * grid_.spacing();
  }
  return GridFunction({grid_.origin()[0]}, grid_.spacing(), {sh[0]}, std::move(vals));
}

GridFunction JointDensity2D::marginal_y() const {
  const auto& sh = grid_.shape();
  std::vector<double> vals(sh[1], 0.0);
  for (std::size_t j = 0; j < sh[1]; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < sh[0]; ++i) s += grid_.values()[i * sh[1] + j];
    vals[j] = s * grid_.spacing();
  }
  return GridFunction({grid_.origin()[1]}, grid_.spacing(), {sh[1]}, std::move(vals));
}

double shannon_entropy(const GridFunction& f) {
  const double mass = f.integral();
  if (std::abs(mass - 1.0) > 1e-6)
    throw std::invalid_argument("shannon_entropy needs a normalized density (mass " +
                                std::to_string(mass) + ")");
  double s = 0.0;
  for (double v : f.values()) s += xlogx(v);
  return -s * std::pow(f.spacing(), f.dim());
}

double conditional_entropy(const JointDensity2D& p, Conditional which) {
  const double joint = shannon_entropy(p.grid());
  const GridFunction marg = which == Conditional::x_given_y ? p.marginal_y() : p.marginal_x();
  return joint - shannon_entropy(marg);
}

double entropy_power(double h) { return std::exp(2.0 * h); }

double conditional_entropy_power(const JointDensity2D& p, Conditional which) {
  return entropy_power(conditional_entropy(p, which));
}

GridFunction sum_density(const JointDensity2D& p) {
  const auto& g = p.grid();
  const auto& sh = g.shape();
  const double eps = g.spacing();
  std::vector<double> vals(sh[0] + sh[1] - 1, 0.0);
  for (std::size_t i = 0; i < sh[0]; ++i)
    for (std::size_t j = 0; j < sh[1]; ++j) vals[i + j] += g.values()[i * sh[1] + j];
  for (double& v : vals) v *= eps;
  return GridFunction({g.origin()[0] + g.origin()[1]}, eps, {vals.size()}, std::move(vals));
}

JointDensity2D ou_flow(const JointDensity2D& p, const FlowParams& params, double s) {
  validate_flow(params);
  if (!(s >= 0.0)) throw std::invalid_argument("flow time must be nonnegative");
  const double a = std::exp(-s) / std::sqrt(1.0 - params.lambda);
  const double sigma2 = 1.0 - std::exp(-2.0 * s);
  const double sigma = std::sqrt(sigma2);

  GridFunction scaled = p.grid().scaled_coordinates(a);
  {
    const double inv = 1.0 / (a * a);
    for (double& v : scaled.values()) v *= inv;
  }

  // A kernel much narrower than the grid cannot be resolved; the flow is
  // then within O(sigma^2) of the pure rescaling.
  if (sigma < 0.75 * scaled.spacing()) return JointDensity2D::from_grid(std::move(scaled));

  const double eps_in = scaled.spacing();
  const double eps_out = std::min(eps_in, sigma / 2.0);
  const double pad = 7.5 * sigma;
  const auto& sh = scaled.shape();
  const double x0 = scaled.origin()[0], y0 = scaled.origin()[1];
  const double x1 = x0 + eps_in * (sh[0] - 1), y1 = y0 + eps_in * (sh[1] - 1);
  const std::size_t nx = static_cast<std::size_t>((x1 - x0 + 2.0 * pad) / eps_out) + 1;
  const std::size_t ny = static_cast<std::size_t>((y1 - y0 + 2.0 * pad) / eps_out) + 1;
  const double ox = x0 - pad, oy = y0 - pad;

  const double gnorm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma);
  auto phi = [&](double d) { return gnorm * std::exp(-d * d / (2.0 * sigma2)); };

  // Separable blur: stage1[i][jo] integrates the y axis, stage2 the x axis.
  std::vector<double> stage1(sh[0] * ny, 0.0);
  parallel_chunks(sh[0], [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double* row = &scaled.values()[i * sh[1]];
      double* orow = &stage1[i * ny];
      for (std::size_t jo = 0; jo < ny; ++jo) {
        const double v = oy + eps_out * jo;
        double acc = 0.0;
        for (std::size_t j = 0; j < sh[1]; ++j) acc += row[j] * phi(v - (y0 + eps_in * j));
        orow[jo] = acc * eps_in;
      }
    }
  });
  std::vector<double> out(nx * ny, 0.0);
  parallel_chunks(nx, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t io = begin; io < end; ++io) {
      const double u = ox + eps_out * io;
      double* orow = &out[io * ny];
      for (std::size_t i = 0; i < sh[0]; ++i) {
        const double w = phi(u - (x0 + eps_in * i)) * eps_in;
        if (w < 1e-240) continue;
        const double* srow = &stage1[i * ny];
        for (std::size_t jo = 0; jo < ny; ++jo) orow[jo] += w * srow[jo];
      }
    }
  });
  return JointDensity2D::from_grid(GridFunction({ox, oy}, eps_out, {nx, ny}, std::move(out)));
}

std::array<double, 3> ou_flow_gaussian_cov(const std::array<double, 3>& cov, double lambda,
                                           double s) {
  const double a2 = std::exp(-2.0 * s) / (1.0 - lambda);
  const double sigma2 = 1.0 - std::exp(-2.0 * s);
  return {a2 * cov[0] + sigma2, a2 * cov[1], a2 * cov[2] + sigma2};
}

CrossTermResult fisher_cross_term(const JointDensity2D& p) {
  const auto& g = p.grid();
  const auto& sh = g.shape();
  if (sh[0] < 3 || sh[1] < 3) throw std::invalid_argument("grid too small for derivatives");
  const double eps = g.spacing();
  const double* v = g.values().data();
  const std::size_t cols = sh[1];

  std::vector<double> logv(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) logv[i] = std::log(std::max(v[i], kLogFloor));

  double a = 0.0, b = 0.0, boundary = 0.0;
  for (std::size_t i = 0; i < sh[0]; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (i == 0 || j == 0 || i + 1 == sh[0] || j + 1 == cols) boundary += v[i * cols + j];

  for (std::size_t i = 1; i + 1 < sh[0]; ++i) {
    for (std::size_t j = 1; j + 1 < cols; ++j) {
      const std::size_t c = i * cols + j;
      const double w = v[c];
      if (w == 0.0) continue;
      const double dx = (logv[c + cols] - logv[c - cols]) / (2.0 * eps);
      const double dy = (logv[c + 1] - logv[c - 1]) / (2.0 * eps);
      const double dxy = (logv[c + cols + 1] - logv[c + cols - 1] - logv[c - cols + 1] +
                          logv[c - cols - 1]) /
                         (4.0 * eps * eps);
      a += w * dx * dy;
      b -= w * dxy;
    }
  }
  CrossTermResult out;
  out.route_a = a * eps * eps;
  out.route_b = b * eps * eps;
  out.excluded_mass = boundary * eps * eps;
  return out;
}

SCurve compute_S(const JointDensity2D& p, const FlowParams& params) {
  validate_flow(params);
  SCurve out;
  out.lambda = params.lambda;
  gauss_legendre(params.nodes, 0.0, params.s_max, out.nodes, out.weights);
  out.integrand.assign(out.nodes.size(), 0.0);
  parallel_chunks(out.nodes.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      JointDensity2D ps = ou_flow(p, params, out.nodes[i]);
      out.integrand[i] = fisher_cross_term(ps).route_a;
    }
  });
  double integral = 0.0;
  for (std::size_t i = 0; i < out.nodes.size(); ++i) integral += out.weights[i] * out.integrand[i];
  const double front = 4.0 * std::sqrt(params.lambda * (1.0 - params.lambda));
  out.S = front * integral;
  out.tail_estimate = front * std::abs(out.integrand.back()) * 0.5;  // e^{-2s} decay
  return out;
}

SCurve compute_S_gaussian_oracle(double rho, const FlowParams& params) {
  validate_flow(params);
  SCurve out;
  out.lambda = params.lambda;
  gauss_legendre(params.nodes, 0.0, params.s_max, out.nodes, out.weights);
  out.integrand.resize(out.nodes.size());
  for (std::size_t i = 0; i < out.nodes.size(); ++i) {
    const auto cs = ou_flow_gaussian_cov({1.0, rho, 1.0}, params.lambda, out.nodes[i]);
    const double det = cs[0] * cs[2] - cs[1] * cs[1];
    // E (dx log p)(dy log p) = (Sigma^{-1})_{12} for a Gaussian.
    out.integrand[i] = -cs[1] / det;
  }
  double integral = 0.0;
  for (std::size_t i = 0; i < out.nodes.size(); ++i) integral += out.weights[i] * out.integrand[i];
  const double front = 4.0 * std::sqrt(params.lambda * (1.0 - params.lambda));
  out.S = front * integral;
  out.tail_estimate = front * std::abs(out.integrand.back()) * 0.5;
  return out;
}

EpiReport conditional_epi_check(const JointDensity2D& p, const FlowParams& params, double tol,
                                bool request_corollary) {
  EpiReport out;
  GridFunction fsum = sum_density(p);
  out.n_sum = entropy_power(shannon_entropy(fsum));
  out.n_x_given_y = conditional_entropy_power(p, Conditional::x_given_y);
  out.n_y_given_x = conditional_entropy_power(p, Conditional::y_given_x);
  out.s_value = compute_S(p, params).S;

  out.lsm_audit = topkis_local_check(p.grid(), 1e-9);
  out.corollary_mode = request_corollary && out.lsm_audit.passed;
  if (request_corollary && !out.lsm_audit.passed)
    out.note = "density failed the log-supermodularity audit; downgraded to theorem mode";

  const double rhs = out.n_x_given_y + out.n_y_given_x;
  const double scale = std::max({out.n_sum, rhs, 1.0});
  out.corollary_holds = out.n_sum >= rhs - tol * scale;
  out.theorem_holds = std::exp(out.s_value) * out.n_sum >= rhs - tol * scale;
  return out;
}

}  // namespace lsmlab
