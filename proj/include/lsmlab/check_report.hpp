#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lsmlab {

// Outcome of an inequality check. worst_violation is signed and absolute
// (positive = failure margin); tolerance is the absolute threshold that was
// applied, scale the normalization it was derived from, so
// worst_violation / scale is the relative margin. passed <=> worst <= tol.
struct CheckReport {
  bool passed = true;
  double worst_violation = 0.0;
  double tolerance = 0.0;
  double scale = 1.0;
  std::vector<std::vector<double>> witness;  // up to 2 points
  std::uint64_t pairs_checked = 0;
  bool indeterminate = false;
  std::string note;

  double relative() const { return scale > 0.0 ? worst_violation / scale : worst_violation; }

  void finalize() { passed = !indeterminate && worst_violation <= tolerance; }
};

// Hypothesis/conclusion pair for the four-function checkers.
struct ReportPair {
  CheckReport hypothesis;
  CheckReport conclusion;
  // A conclusion is only asserted by the theorems when the hypothesis holds.
  bool theorem_instance_ok() const { return !hypothesis.passed || conclusion.passed; }
};

}  // namespace lsmlab
