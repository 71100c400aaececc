#pragma once

// Log-supermodularity (MTP2) and discrete log-concavity decisions, with
// witnesses, via brute force over pairs and the local Topkis minor
// criterion. Tolerances are relative: the defining inequality is
// multiplicative, so thresholds scale with (max f)^2.

#include <span>

#include "lsmlab/check_report.hpp"
#include "lsmlab/lattice.hpp"

namespace lsmlab {

// Brute force over all incomparable index pairs in the support box:
// f(x) f(y) <= f(x^y) f(xvy) + tol * (max f)^2. Comparable pairs are an
// exact identity and are skipped.
CheckReport is_log_supermodular(const LatticeFunction& f, double tol);
CheckReport is_log_supermodular(const GridFunction& f, double tol);

// Local criterion: every 2x2 minor f(z) f(z+ei+ej) >= f(z+ei) f(z+ej)
// - tol * (max f)^2 for i < j. Interior zeros make the log-minor
// undefined and are reported as indeterminate with the offending cell.
CheckReport topkis_local_check(const LatticeFunction& f, double tol);
CheckReport topkis_local_check(const GridFunction& f, double tol);

// d=1 discrete log-concavity: contiguous support and
// g(n)^2 >= g(n+1) g(n-1) - tol * (max g)^2 at interior support points.
// Support gaps count as violations with the across-gap product as margin.
CheckReport is_log_concave_1d(const LatticeFunction& g, double tol);
CheckReport log_concavity_check(std::span<const double> values, double tol);

// True iff the brute-force and Topkis criteria agree on pass/fail.
bool equivalence_audit(const LatticeFunction& f, double tol);
bool equivalence_audit(const GridFunction& f, double tol);

}  // namespace lsmlab
