#pragma once

// Convolutions on Z^d and on grids, log-concave product kernel
// constructors, the preservation experiments, and randomized
// counterexample search.

#include <cstdint>
#include <optional>
#include <vector>

#include "lsmlab/check_report.hpp"
#include "lsmlab/density_model.hpp"
#include "lsmlab/lattice.hpp"

namespace lsmlab {

// Exact sum f*g(x) = sum_z f(x-z) g(z); support box = Minkowski sum.
LatticeFunction convolve_lattice(const LatticeFunction& f, const LatticeFunction& g);

// (f*g)(x) = eps^d sum_z f(x-z) g(z) on the Minkowski-sum box; direct
// summation is the reference semantics. Requires equal spacing.
GridFunction convolve_grid(const GridFunction& f, const GridFunction& g);

struct LatticeKernel {
  LatticeFunction kernel;
  std::vector<CheckReport> factor_reports;
  bool all_factors_log_concave = false;
};

struct ModelKernel {
  DensityModel kernel;
  std::vector<CheckReport> factor_reports;
  bool all_factors_log_concave = false;
};

// Outer product of 1D factors; each factor is audited for log-concavity
// (discrete triples for lattices, sampled log-concavity for models).
LatticeKernel make_product_kernel(const std::vector<LatticeFunction>& factors);
ModelKernel make_product_kernel(const std::vector<DensityModel>& factors);

struct DiscretizedKernel {
  GridFunction grid;
  double truncated_mass = 0.0;  // analytic estimate of mass outside the box
};

// Standard Gaussian product kernel sampled on a symmetric vertex lattice
// containing 0; radius is expanded so the truncated mass stays below 1e-10.
DiscretizedKernel discretize_gaussian_kernel(int dim, double eps, double radius = 7.0);

struct PreservationReport {
  CheckReport premise;     // is f log-supermodular?
  CheckReport conclusion;  // is f*g log-supermodular?
  bool premise_ok = false;
  bool passed = false;     // premise_ok && conclusion.passed
};

PreservationReport preservation_check(const LatticeFunction& f, const LatticeFunction& g,
                                      double tol);
PreservationReport preservation_check(const GridFunction& f, const GridFunction& g, double tol);

struct QuadrupleOptions {
  std::uint64_t max_quadruples = 1'000'000;  // exhaustive below, seeded sampling above
  std::uint64_t seed = 0;
};

// Checks g(x-u) g(y-w) <= g(x^y - u^w) g(xvy - uvw) over quadruples drawn
// from the support box; equivalently log-supermodularity of (x,y) -> g(x-y)
// on the doubled lattice. Witness points are the doubled-lattice pair
// (x,u) and (y,w).
CheckReport kernel_condition_check(const LatticeFunction& g, double tol,
                                   const QuadrupleOptions& opts = {});
CheckReport kernel_condition_check(const GridFunction& g, double tol,
                                   const QuadrupleOptions& opts = {});

struct Counterexample {
  LatticeFunction f;
  LatticeFunction g;
  CheckReport conv_report;  // failing report for f*g
  std::uint64_t trial_index = 0;
};

enum class KernelDraw { general_lsm, log_concave_product };

// Randomized search over small LSM pairs on Z^2; returns the first pair
// whose convolution fails the brute-force check, or nullopt. Restricted to
// product kernels the search finds nothing (that is the theorem).
std::optional<Counterexample> counterexample_search(std::uint64_t seed, std::uint64_t trials,
                                                    int extent = 3,
                                                    KernelDraw draw = KernelDraw::general_lsm);

}  // namespace lsmlab
