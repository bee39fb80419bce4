#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace agestruct::cli {

struct SuiteCheck {
  std::string name;
  double value = 0.0;
  std::string criterion;
  bool passed = false;
};

struct SuiteResult {
  std::string suite;
  std::vector<SuiteCheck> checks;

  bool passed() const;
  // One line per check.
  std::string to_table() const;
};

// Randomized non-negative initial data on each gallery model.
SuiteResult verify_positivity(int runs_per_model = 4, std::uint64_t seed = 1);
// Window ratios on the nonlinear gallery model and the one-iteration linear case.
SuiteResult verify_contraction(int threads = 1);
// Response to delta phi perturbations of the initial data for two decades of delta.
SuiteResult verify_dependence(int threads = 1);
// Discrete L2 -> H1 smoothing constant on two spatial refinements.
SuiteResult verify_smoothing(std::uint64_t seed = 7);
// Self-convergence order on a smooth linear problem and the exact transport case.
SuiteResult verify_convergence(int threads = 1);
// Mass conservation without births, deaths or drift.
SuiteResult verify_conservation(int threads = 1);

std::vector<std::string> suite_names();
// Throws ConfigError for an unknown suite.
SuiteResult run_suite(const std::string& name, std::uint64_t seed, int threads);

}  // namespace agestruct::cli
