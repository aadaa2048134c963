// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#ifndef VRVI_VERIFY_HPP_
#define VRVI_VERIFY_HPP_

#include <string>
#include <vector>

namespace vrvi {

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;  // measured value vs threshold, for the report table
};

// Suites: oracles, projections, monotonicity, zeroth_order, params.
std::vector<std::string> verify_suite_names();

// Runs one suite and returns its named checks. Unknown suite -> ConfigError.
std::vector<VerifyCheck> run_verify_suite(const std::string& suite);

}  // namespace vrvi

#endif  // VRVI_VERIFY_HPP_
