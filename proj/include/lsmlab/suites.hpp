#pragma once

// Named seeded property suites tying the modules into reproducible
// experiments; used by the CLI run-suite command and the acceptance tests.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace lsmlab {

struct SuiteConfig {
  std::string name;  // preservation | fourfn-ad | fourfn-general | transport | epi | counterexample
  std::uint64_t seed = 1;
  int instances = 200;
  int d = 2;
  double tol = 1e-9;
  std::uint64_t trials = 20'000;          // counterexample search
  std::vector<double> gaussian_rhos{0.0, 0.25, 0.5, 0.75};
};

struct SuiteReport {
  std::string name;
  std::uint64_t seed = 0;
  int instances_run = 0;
  int failures = 0;
  double worst_margin = 0.0;  // most adverse relative margin seen
  std::vector<std::string> failure_notes;
  nlohmann::json details;

  bool passed() const { return failures == 0; }
};

SuiteReport run_suite(const SuiteConfig& config);

nlohmann::json to_json(const SuiteReport& r);

}  // namespace lsmlab
