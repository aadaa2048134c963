// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#ifndef VRVI_PROBLEM_HPP_
#define VRVI_PROBLEM_HPP_

#include <functional>
#include <optional>

#include "vrvi/core.hpp"
#include "vrvi/oracle.hpp"

namespace vrvi {

// The full instance: operator F(x) = Σ H_i(x) + Σ ∇g_i(x) over a convex set,
// with optional strong-monotonicity modulus, oracle noise, and metric hooks.
struct CompositeVIProblem {
  ComponentFamily h;  // general VI components H_i
  ComponentFamily g;  // gradient components ∇g_i (value() carries g_i)
  ConstraintSet set = ConstraintSet::whole(1);
  double mu_h = 0;  // strong-monotonicity modulus of ΣH_i; 0 = merely monotone
  NoiseModel noise_h;
  NoiseModel noise_g;

  Vector x0;                       // starting point; empty -> project(0)
  std::optional<Vector> x_star;    // high-accuracy reference for dist²/q_gap
  std::optional<double> f_star;    // objective reference for obj_gap
  // Constrained-program hook: maps a (primal;dual) point to the primal
  // constraint violation ||max(0, Σ_j h_j(x))||_∞. Set by the KKT builder.
  std::function<double(const Vector&)> cons_viol;

  int dim() const { return set.dim(); }
  double L_h() const { return h.empty() ? 0.0 : h.total_lipschitz(); }
  double L_g() const { return g.empty() ? 0.0 : g.total_lipschitz(); }

  Vector start_point() const;
  // Noiseless F(x); requires exact component evaluations (metrics/shadow only).
  Vector exact_full(const Vector& x) const;
  bool exact_available() const { return h.has_exact() && g.has_exact(); }
  // Σ g_i(x); 0 for an empty gradient family.
  double g_value(const Vector& x) const { return g.empty() ? 0.0 : g.value_sum(x); }
  bool g_values_available() const { return g.empty() || g.has_values(); }
};

// ||Σ H_i(x) + Σ ∇g_i(x)||₂ via noiseless evaluation.
double residual_norm(const CompositeVIProblem& p, const Vector& x);

// Gap evaluator anchored at the problem's reference solution.
GapEvaluator make_gap_evaluator(const CompositeVIProblem& p);

// Fills the metric columns of a trace row at `point`, leaving unavailable
// metrics as NaN. Never touches oracle counters.
class MetricsEval {
 public:
  explicit MetricsEval(const CompositeVIProblem& p);
  void fill(TraceRecord& t, const Vector& point) const;
  bool has_reference() const { return static_cast<bool>(gap_); }
  double dist_sq(const Vector& point) const;

 private:
  const CompositeVIProblem* p_;
  std::optional<GapEvaluator> gap_;
};

}  // namespace vrvi

#endif  // VRVI_PROBLEM_HPP_
