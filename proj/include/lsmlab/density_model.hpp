#pragma once

// Closed-form evaluable densities: named families plus products and
// tabulated grids. Used wherever off-grid evaluation is required (means of
// points, flow oracles, hypothesis sampling).

#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "lsmlab/lattice.hpp"

namespace lsmlab {

class DensityModel;

struct GaussianModel {
  std::vector<double> mean;
  std::vector<double> cov;   // row-major d x d, symmetric positive definite
  // Precomputed at construction.
  std::vector<double> chol;  // lower-triangular factor, row-major
  double log_norm = 0.0;     // -d/2 log(2 pi) - 1/2 log det
};

struct UniformBoxModel {
  RealBox box;  // value 1 on the closed box, 0 outside
};

// exp(phi) for a concave piecewise-linear phi given by knots; 1D.
// Zero outside [knots_x.front(), knots_x.back()].
struct ExpPLConcaveModel {
  std::vector<double> knot_x;
  std::vector<double> knot_phi;
};

struct ProductModel {
  std::vector<DensityModel> factors;  // each 1D
};

struct TabulatedModel {
  GridFunction grid;  // multilinear interpolation, 0 outside the hull
};

class DensityModel {
 public:
  using Family =
      std::variant<GaussianModel, UniformBoxModel, ExpPLConcaveModel, ProductModel, TabulatedModel>;

  explicit DensityModel(Family family);

  static DensityModel gaussian(std::vector<double> mean, std::vector<double> cov);
  static DensityModel gaussian1d(double mean, double variance);
  static DensityModel standard_gaussian(int dim);
  static DensityModel uniform_box(std::vector<double> lower, std::vector<double> upper);
  static DensityModel exp_pl_concave(std::vector<double> knot_x, std::vector<double> knot_phi);
  static DensityModel product(std::vector<DensityModel> factors);
  static DensityModel tabulated(GridFunction grid);

  int dim() const { return dim_; }
  double operator()(std::span<const double> x) const;
  double operator()(double x) const;  // 1D convenience

  const Family& family() const { return *family_; }

 private:
  std::shared_ptr<const Family> family_;
  int dim_ = 0;
};

// Pointwise evaluation of the model on the vertex lattice of [box] with
// spacing eps: nodes box.lower + k*eps while they stay inside the box.
GridFunction restrict_to_lattice(const DensityModel& m, const RealBox& box, double eps);

// Cell-centered discretization: nodes at box.lower + (k + 1/2)*eps. The
// midpoint variant is what quadrature-facing code uses.
GridFunction discretize_cells(const DensityModel& m, const RealBox& box, double eps);

// Midpoint-rule integral of the model over the box.
double quadrature_integral(const DensityModel& m, const RealBox& box, double eps);

}  // namespace lsmlab
