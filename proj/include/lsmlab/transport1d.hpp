#pragma once

// One-dimensional monotone transport: piecewise-linear CDFs, the map
// T = F2^{-1} o F1 (so T#nu1 = nu2, consistent with T' = n1 / n2 o T),
// min/max and generalized-mean pushforwards, the entropy comparison of the
// transport proofs, the derivative bound, and log-Laplace duality.

#include <array>
#include <functional>
#include <vector>

#include "lsmlab/check_report.hpp"
#include "lsmlab/density_model.hpp"
#include "lsmlab/fourfn.hpp"
#include "lsmlab/lattice.hpp"

namespace lsmlab {

// Probability density on a 1D cell-centered grid: cell k covers
// [lo + k e, lo + (k+1) e) with constant density values_[k]; the CDF is
// piecewise linear and sums to exactly one. Construction truncates tails
// below 1e-10 of the mass and renormalizes.
class Density1D {
 public:
  static Density1D from_samples(double lo, double eps, std::vector<double> values,
                                bool trim_tails = true);
  static Density1D from_model(const DensityModel& m, double lo, double hi, double eps);
  static Density1D from_function(const std::function<double(double)>& f, double lo, double hi,
                                 double eps);
  // Interprets a 1D grid's nodes as cell centers.
  static Density1D from_grid(const GridFunction& g);

  std::size_t cells() const { return values_.size(); }
  double eps() const { return eps_; }
  double lo() const { return lo_; }                      // left cell edge
  double hi() const { return lo_ + eps_ * cells(); }     // right cell edge
  double center(std::size_t k) const { return lo_ + eps_ * (k + 0.5); }
  double value(std::size_t k) const { return values_[k]; }
  const std::vector<double>& values() const { return values_; }

  double raw_mass() const { return raw_mass_; }
  bool strictly_positive() const { return strictly_positive_; }

  double density(double x) const;      // linear interpolation between centers
  double cdf(double x) const;          // piecewise linear, exact mass
  double inverse_cdf(double q) const;  // q in (0, 1)

  // Relative entropy H(nu | Lebesgue) = integral n log n, trapezoid
  // weights on the cell centers, 0 log 0 = 0.
  double relative_entropy() const;

  GridFunction to_grid() const;

  Density1D() = default;  // empty shell; fill via the named constructors

 private:
  double lo_ = 0.0;
  double eps_ = 1.0;
  std::vector<double> values_;
  std::vector<double> cum_;  // cum_[k] = mass of cells < k; cum_[cells] == 1
  double raw_mass_ = 0.0;
  bool strictly_positive_ = false;
};

double relative_entropy(const Density1D& nu);

// Resamples both densities onto the union interval with the finer spacing.
std::pair<Density1D, Density1D> to_common_grid(const Density1D& nu1, const Density1D& nu2);

struct TransportMap1D {
  std::vector<double> x;        // quantile-equispaced sample points under F1
  std::vector<double> t;        // T(x), nondecreasing
  std::vector<double> t_prime;  // analytic n1(x) / n2(T(x))
};

// T = F2^{-1} o F1 tabulated at quantile-equispaced points.
TransportMap1D monotone_map(const Density1D& nu1, const Density1D& nu2,
                            std::size_t points = 4096);

// T evaluated at one point.
double transport_value(const Density1D& nu1, const Density1D& nu2, double x);

// Densities of the min/max pushforwards of the monotone coupling:
// n- = n1 on A, n2 off A, with A = {x <= T(x)}; n+ swapped. Values are
// renormalized; the pre-normalization mass is recorded on each density.
std::pair<Density1D, Density1D> minmax_pushforward(const Density1D& nu1, const Density1D& nu2);

struct MeanPushforward {
  Density1D density;
  std::vector<double> x;        // sample points
  std::vector<double> h;        // H(x) = M_alpha^s(x, T(x))
  std::vector<double> h_prime;  // analytic derivative along the map
};

// Pushforward of nu1 under x -> M_alpha^s(x, T(x)) via the
// change-of-variables density n(H(x)) = n1(x) / H'(x).
MeanPushforward mean_pushforward(const Density1D& nu1, const Density1D& nu2,
                                 const MeanSpec& spec, std::size_t points = 4096);

struct DisplacementDetail {
  CheckReport report;      // H(nu-) + H(nu+) <= H(nu1) + H(nu2) within tol
  double entropy_minus = 0.0;
  double entropy_plus = 0.0;
  double entropy_1 = 0.0;
  double entropy_2 = 0.0;
  double mass_identity = 0.0;  // the "H = 1" transport integral
  double mass_minus = 0.0;     // raw masses of the assembled densities
  double mass_plus = 0.0;
};

DisplacementDetail displacement_convexity_detail(const Density1D& nu1, const Density1D& nu2,
                                                 double tol);
CheckReport displacement_convexity_check(const Density1D& nu1, const Density1D& nu2, double tol);

// Pointwise bound H3'(x) >= T'(x)^{1-s} for alpha in (0, 1] at
// quantile-equispaced samples.
CheckReport derivative_bound_check(const Density1D& nu1, const Density1D& nu2, double alpha,
                                   double s, double tol, std::size_t points = 2048);

struct DualityEntry {
  double functional = 0.0;  // integral f dnu - H(nu | lambda)
  double gap = 0.0;         // log integral e^f - functional, >= 0
};

struct DualityReport {
  double log_integral = 0.0;
  std::vector<DualityEntry> candidates;
  double gibbs_gap = 0.0;  // equality deficit at the Gibbs density
  double tolerance = 0.0;
  bool passed = false;
};

// log integral e^f = sup over nu of (integral f dnu - H(nu|lambda)):
// every candidate stays below, the Gibbs density e^f / Z attains it.
DualityReport log_laplace_duality_check(const std::function<double(double)>& f, double lo,
                                        double hi, double eps,
                                        const std::vector<Density1D>& candidates, double tol);

struct TransportChainReport {
  double coupling_slack = 0.0;   // hypothesis step of the proof chain
  double entropy_slack = 0.0;    // entropy comparison step
  std::array<double, 4> duality_gaps{};  // per-function log-Laplace slack
  double conclusion_slack = 0.0;  // final integral inequality in log form
  double m = 0.0;
  double tolerance = 0.0;
  bool passed = false;  // every link has slack >= -tol
};

// Reproduces each inequality link of the transport proof for four
// densities f1..f4 on the working interval: min/max mode gives the
// Ahlswede-Daykin chain, generalized means the Thm 6.3 chain with
// weights (m, r), m = s r + (1-r) t.
TransportChainReport transport_fourfn_audit(
    const std::array<std::function<double(double)>, 4>& f, const Density1D& nu1,
    const Density1D& nu2, const MeanSpec& mean3, const MeanSpec& mean4, double r,
    bool minmax_mode, double tol);

}  // namespace lsmlab
