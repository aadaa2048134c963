// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#ifndef VRVI_BASELINES_HPP_
#define VRVI_BASELINES_HPP_

#include <cstdint>

#include "vrvi/problem.hpp"

namespace vrvi {

// Deterministic reference solvers used to produce high-accuracy solutions for
// metrics and to sanity-check generators. They evaluate the exact full
// operator (no sampling, no noise) and never touch oracle counters.
struct ExtragradientParams {
  double step = 0;  // 0 = auto: 1/(L_h + L_g); larger than that is rejected
  std::int64_t max_iters = 1'000'000;
  double tol = 1e-10;
};

struct BaselineResult {
  Vector x;
  double residual = 0;  // natural residual ||x - P(x - τF(x))|| / τ at exit
  std::int64_t iters = 0;
  bool converged = false;
};

// Classical two-projection extragradient on F = ΣH_i + Σ∇g_i:
//   y = P(x - τF(x)), x⁺ = P(x - τF(y)).
// Stops when the natural residual drops below tol (coincides with ||F(x)||
// on unconstrained problems); otherwise returns the best iterate found.
// When `sink` is set, metric rows are emitted every `log_interval` iterations
// (0 = every m1+m2 iterations) with oracle counts charged at 2(m1+m2) full
// component evaluations per iteration.
BaselineResult solve_extragradient(const CompositeVIProblem& p, const ExtragradientParams& prm,
                                   const TraceSink& sink = nullptr,
                                   std::int64_t log_interval = 0);

// Projected gradient for pure optimization instances (empty general family):
//   x⁺ = P(x - τ∇g(x)).
BaselineResult solve_projected_gradient(const CompositeVIProblem& p,
                                        const ExtragradientParams& prm);

// Solution certificate: min over `samples` random feasible points z of
// ⟨F(x_star), z - x_star⟩. A genuine solution keeps this ≥ -tolerance.
double vi_certificate(const CompositeVIProblem& p, const Vector& x_star, int samples = 1000,
                      std::uint64_t seed = 0);

}  // namespace vrvi

#endif  // VRVI_BASELINES_HPP_
