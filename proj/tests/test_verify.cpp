// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"
#include "vrvi/core.hpp"
#include "vrvi/verify.hpp"

using namespace vrvi;

TEST_CASE("the verify catalog lists five suites") {
  std::vector<std::string> names = verify_suite_names();
  REQUIRE(names.size() == 5);
  std::vector<std::string> expected = {"oracles", "projections", "monotonicity",
                                       "zeroth_order", "params"};
  CHECK(names == expected);
}

TEST_CASE("unknown suite names are rejected") {
  CHECK_THROWS_AS(run_verify_suite("bogus"), ConfigError);
  CHECK_THROWS_AS(run_verify_suite(""), ConfigError);
}

TEST_CASE("every suite runs green with named checks") {
  for (const std::string& suite : verify_suite_names()) {
    CAPTURE(suite);
    std::vector<VerifyCheck> checks = run_verify_suite(suite);
    CHECK(!checks.empty());
    for (const VerifyCheck& c : checks) {
      CAPTURE(c.name);
      CAPTURE(c.detail);
      CHECK(c.pass);
      CHECK(!c.name.empty());
    }
  }
}
