#pragma once

// Self-verification suites. Each suite evaluates identities and inequalities of the
// library on exhaustive grids and seeded random inputs, and records one CheckResult per
// property with both sides of the relation.

#include <cstdint>
#include <string>
#include <vector>

#include "fuchs/report.hpp"

namespace fuchs {

struct RunConfig {
  int prime = 3;
  int n = 1;
  int m = 3;
  int N = 2;
  std::vector<int> theta_digits{1};
  std::string suite = "all";
  std::uint64_t seed = 42;
  double tol = 0.0;  // 0 keeps the per-check defaults
  bool strict = false;
  bool timing = false;
};

const std::vector<std::string>& suite_names();  // without "all"

// Throws ParameterError for an invalid prime, level, resolution, theta or suite name.
void validate(const RunConfig& config);

// Runs the selected suites; the numeric content depends only on the config.
Report run_verify(const RunConfig& config);

}  // namespace fuchs
