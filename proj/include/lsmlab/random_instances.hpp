#pragma once

// Seeded instance generators shared by the property suites, the
// randomized searches, and the acceptance runs.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "lsmlab/convolve.hpp"
#include "lsmlab/density_model.hpp"
#include "lsmlab/fourfn.hpp"
#include "lsmlab/lattice.hpp"
#include "lsmlab/transport1d.hpp"

namespace lsmlab {

using Rng = std::mt19937_64;

// exp of a random supermodular potential on a rows x cols box: a uniform
// draw symmetrized by adding c * x1 * x2 with c just large enough that all
// adjacent minors clear `margin`. Strictly positive and exactly LSM.
LatticeFunction random_lsm_lattice(Rng& rng, int rows, int cols, double margin = 0.1);

// d = 2 or 3 version on the given extents.
LatticeFunction random_lsm_lattice_d(Rng& rng, const std::vector<int>& extents,
                                     double margin = 0.1);

// Product of random 1D log-concave factors (binomial, geometric,
// two-sided geometric, discretized Gaussian).
LatticeKernel random_log_concave_product_kernel(Rng& rng, int dim);

// exp(a1(x1) + a2(x2) + c x1 x2) with c > 0: LSM but never a product.
LatticeFunction random_nonproduct_lsm_kernel(Rng& rng, int extent);

// Smooth strictly LSM density on a d=2 grid: exp of a quadratic potential
// with positive cross coefficient, sampled on the vertex lattice.
GridFunction random_grid_lsm_density(Rng& rng, const RealBox& box, double eps);

// Strictly positive random grid for the equivalence audits (log-uniform
// independent values).
GridFunction random_positive_grid(Rng& rng, const std::vector<std::size_t>& shape, double eps);

// Random strictly positive 1D density on [lo, hi] (Gaussian mixtures,
// skewed and heavy-shouldered shapes), truncated and normalized.
Density1D random_density_1d(Rng& rng, double lo, double hi, double eps);

// Pair on a common grid; positive_support shifts everything into (0, inf).
std::pair<Density1D, Density1D> random_density_pair(Rng& rng, bool positive_support = false);

// Random log-concave 1D model (Gaussian or exp of a random concave
// piecewise-linear potential).
DensityModel random_log_concave_model_1d(Rng& rng);

// Decreasing log-concave model on (0, x_max]: exp of a concave
// piecewise-linear potential with nonpositive slopes. All-equal quadruples
// of these satisfy the generalized Prekopa-Leindler hypothesis for every
// admissible (r, s, t, alpha, beta).
DensityModel random_decreasing_log_concave_model(Rng& rng, double x_max = 6.0);

// Hypothesis-true Ahlswede-Daykin quadruples: FKG (all four equal an LSM
// function), masked (f1 = a mu, f2 = b mu with masks <= 1, f3 = f4 = mu),
// or constant-top (f3 = f4 = max value).
LatticeQuad random_ad_quad(Rng& rng, int max_extent);

// Hypothesis-true generalized Prekopa-Leindler instance built on a common
// decreasing log-concave base with slot scalings a1, a2 <= 1 <= a3, a4.
FourFnInstance random_general_pl_instance(Rng& rng, bool near_three_function = false);

}  // namespace lsmlab
