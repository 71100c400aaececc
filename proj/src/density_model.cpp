#include "lsmlab/density_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lsmlab {

namespace {

// Cholesky factor of a small SPD matrix (d <= 4), row-major.
std::vector<double> cholesky(const std::vector<double>& a, int d) {
  std::vector<double> l(d * d, 0.0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a[i * d + j];
      for (int k = 0; k < j; ++k) s -= l[i * d + k] * l[j * d + k];
      if (i == j) {
        if (!(s > 0.0)) throw std::invalid_argument("covariance matrix is not positive definite");
        l[i * d + i] = std::sqrt(s);
      } else {
        l[i * d + j] = s / l[j * d + j];
      }
    }
  }
  return l;
}

double eval_gaussian(const GaussianModel& g, std::span<const double> x) {
  const int d = static_cast<int>(g.mean.size());
  double z[kMaxDim];
  double quad = 0.0;
  for (int i = 0; i < d; ++i) {
    double s = x[i] - g.mean[i];
    for (int k = 0; k < i; ++k) s -= g.chol[i * d + k] * z[k];
    z[i] = s / g.chol[i * d + i];
    quad += z[i] * z[i];
  }
  return std::exp(g.log_norm - 0.5 * quad);
}

double eval_exp_pl(const ExpPLConcaveModel& m, double x) {
  const auto& xs = m.knot_x;
  if (x < xs.front() || x > xs.back()) return 0.0;
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t hi = std::min<std::size_t>(xs.size() - 1,
                                         static_cast<std::size_t>(it - xs.begin()));
  if (hi == 0) hi = 1;
  std::size_t lo = hi - 1;
  double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
  double phi = m.knot_phi[lo] + t * (m.knot_phi[hi] - m.knot_phi[lo]);
  return std::exp(phi);
}

}  // namespace

DensityModel::DensityModel(Family family)
    : family_(std::make_shared<const Family>(std::move(family))) {
  dim_ = std::visit(
      [](const auto& f) -> int {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, GaussianModel>)
          return static_cast<int>(f.mean.size());
        else if constexpr (std::is_same_v<T, UniformBoxModel>)
          return f.box.dim();
        else if constexpr (std::is_same_v<T, ExpPLConcaveModel>)
          return 1;
        else if constexpr (std::is_same_v<T, ProductModel>)
          return static_cast<int>(f.factors.size());
        else
          return f.grid.dim();
      },
      *family_);
  if (dim_ < 1 || dim_ > kMaxDim)
    throw std::invalid_argument("density model dimension must be in [1, 4]");
}

DensityModel DensityModel::gaussian(std::vector<double> mean, std::vector<double> cov) {
  const int d = static_cast<int>(mean.size());
  if (cov.size() != static_cast<std::size_t>(d) * d)
    throw std::invalid_argument("covariance must be d x d");
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < i; ++j)
      if (std::abs(cov[i * d + j] - cov[j * d + i]) > 1e-12 * (1.0 + std::abs(cov[i * d + j])))
        throw std::invalid_argument("covariance matrix must be symmetric");
  GaussianModel g;
  g.mean = std::move(mean);
  g.cov = std::move(cov);
  g.chol = cholesky(g.cov, d);
  double log_det = 0.0;
  for (int i = 0; i < d; ++i) log_det += 2.0 * std::log(g.chol[i * d + i]);
  g.log_norm = -0.5 * d * std::log(2.0 * std::numbers::pi) - 0.5 * log_det;
  return DensityModel(Family(std::move(g)));
}

DensityModel DensityModel::gaussian1d(double mean, double variance) {
  return gaussian({mean}, {variance});
}

DensityModel DensityModel::standard_gaussian(int dim) {
  std::vector<double> cov(dim * dim, 0.0);
  for (int i = 0; i < dim; ++i) cov[i * dim + i] = 1.0;
  return gaussian(std::vector<double>(dim, 0.0), std::move(cov));
}

DensityModel DensityModel::uniform_box(std::vector<double> lower, std::vector<double> upper) {
  if (lower.size() != upper.size())
    throw std::invalid_argument("uniform box corner dimension mismatch");
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (!(lower[i] <= upper[i])) throw std::invalid_argument("uniform box is empty");
  return DensityModel(Family(UniformBoxModel{RealBox{std::move(lower), std::move(upper)}}));
}

DensityModel DensityModel::exp_pl_concave(std::vector<double> knot_x,
                                          std::vector<double> knot_phi) {
  if (knot_x.size() < 2 || knot_x.size() != knot_phi.size())
    throw std::invalid_argument("piecewise-linear potential needs >= 2 matching knots");
  for (std::size_t i = 1; i < knot_x.size(); ++i)
    if (!(knot_x[i] > knot_x[i - 1]))
      throw std::invalid_argument("potential knots must be strictly increasing");
  // Concavity: slopes nonincreasing.
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < knot_x.size(); ++i) {
    double s = (knot_phi[i] - knot_phi[i - 1]) / (knot_x[i] - knot_x[i - 1]);
    if (s > prev + 1e-12)
      throw std::invalid_argument("piecewise-linear potential is not concave");
    prev = s;
  }
  return DensityModel(Family(ExpPLConcaveModel{std::move(knot_x), std::move(knot_phi)}));
}

DensityModel DensityModel::product(std::vector<DensityModel> factors) {
  if (factors.empty()) throw std::invalid_argument("product model needs at least one factor");
  for (const auto& f : factors)
    if (f.dim() != 1) throw std::invalid_argument("product model factors must be 1D");
  return DensityModel(Family(ProductModel{std::move(factors)}));
}

DensityModel DensityModel::tabulated(GridFunction grid) {
  return DensityModel(Family(TabulatedModel{std::move(grid)}));
}

double DensityModel::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("evaluation point dimension mismatch");
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, GaussianModel>) {
          return eval_gaussian(f, x);
        } else if constexpr (std::is_same_v<T, UniformBoxModel>) {
          return f.box.contains(x) ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, ExpPLConcaveModel>) {
          return eval_exp_pl(f, x[0]);
        } else if constexpr (std::is_same_v<T, ProductModel>) {
          double v = 1.0;
          for (std::size_t i = 0; i < f.factors.size(); ++i) {
            v *= f.factors[i](x[i]);
            if (v == 0.0) return 0.0;
          }
          return v;
        } else {
          return f.grid.interpolate(x);
        }
      },
      *family_);
}

double DensityModel::operator()(double x) const {
  return (*this)(std::span<const double>(&x, 1));
}

namespace {

GridFunction sample_on_lattice(const DensityModel& m, const RealBox& box, double eps,
                               double offset) {
  if (!(eps > 0.0)) throw std::invalid_argument("lattice spacing must be positive");
  const int d = box.dim();
  if (d != m.dim()) throw std::invalid_argument("box/model dimension mismatch");
  std::vector<std::size_t> shape(d);
  std::vector<double> origin(d);
  for (int i = 0; i < d; ++i) {
    double len = box.upper[i] - box.lower[i];
    if (!(len >= 0.0)) throw std::invalid_argument("invalid box");
    // Vertex grids include both endpoints; cell grids tile the box.
    std::size_t n = offset == 0.0
                        ? static_cast<std::size_t>(std::floor(len / eps + 1e-9)) + 1
                        : std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(len / eps)));
    shape[i] = n;
    origin[i] = box.lower[i] + offset * eps;
  }
  std::size_t total = 1;
  for (auto s : shape) total *= s;
  std::vector<double> values(total);
  std::vector<double> pt(d);
  MultiIndex idx(d, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (int i = d - 1; i >= 0; --i) {
      idx[i] = static_cast<int>(rem % shape[i]);
      rem /= shape[i];
    }
    for (int i = 0; i < d; ++i) pt[i] = origin[i] + eps * idx[i];
    values[flat] = m(pt);
  }
  return GridFunction(std::move(origin), eps, std::move(shape), std::move(values));
}

}  // namespace

GridFunction restrict_to_lattice(const DensityModel& m, const RealBox& box, double eps) {
  return sample_on_lattice(m, box, eps, 0.0);
}

GridFunction discretize_cells(const DensityModel& m, const RealBox& box, double eps) {
  return sample_on_lattice(m, box, eps, 0.5);
}

double quadrature_integral(const DensityModel& m, const RealBox& box, double eps) {
  return discretize_cells(m, box, eps).integral();
}

}  // namespace lsmlab
