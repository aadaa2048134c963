// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#ifndef VRVI_RUN_HPP_
#define VRVI_RUN_HPP_

#include <cstdint>
#include <vector>

#include "vrvi/core.hpp"

namespace vrvi {

// Run-loop controls shared by every solver driver. Seed and batch size are
// solver-constructor arguments (they shape the instance, not the loop).
struct RunControl {
  std::int64_t budget = 1'000'000;  // max cumulative component evaluations
  double tol = 0;                   // 0 = run to budget; else dist² (x* known) or residual
  std::int64_t log_interval = 0;    // 0 = solver default
};

struct RunResult {
  std::vector<TraceRecord> traces;
  Vector final_point;  // the solver's convergence-measure iterate
  OracleCounter counters;
  bool converged = false;
};

}  // namespace vrvi

#endif  // VRVI_RUN_HPP_
