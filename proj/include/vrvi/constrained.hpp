// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#ifndef VRVI_CONSTRAINED_HPP_
#define VRVI_CONSTRAINED_HPP_

#include <functional>
#include <vector>

#include "vrvi/problem.hpp"

namespace vrvi {

// One convex objective component g_i. `lipschitz` is the smoothness constant
// of the gradient (0 = estimate empirically at build time).
struct ObjectiveComponent {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  double lipschitz = 0;
};

// One vector-valued constraint block h_j: ℝⁿ → ℝ^ℓ (componentwise convex),
// with Jacobian ℝⁿ → ℝ^{ℓ×n}. `lipschitz` is the Lipschitz constant of the
// induced saddle map z ↦ ((Jh_j(x))ᵀy; -h_j(x)) over the primal-dual domain
// (0 = estimate empirically at build time).
struct ConstraintBlock {
  std::function<Vector(const Vector&)> value;
  std::function<Matrix(const Vector&)> jacobian;
  double lipschitz = 0;
};

// Finite-sum convex program: min Σ g_i(x) s.t. Σ_j h_j(x) ≤ 0, x ∈ primal_set.
struct ConstrainedProgram {
  std::vector<ObjectiveComponent> objective;
  std::vector<ConstraintBlock> constraints;
  ConstraintSet primal_set = ConstraintSet::whole(1);
  int ell = 0;  // rows per constraint block

  int dim() const { return primal_set.dim(); }
};

// How per-component Lipschitz constants are obtained at build time.
//   kClosedForm: every component must carry its exact constant (builders for
//     structured instances, e.g. linear constraints, fill it in).
//   kEmpirical: max difference quotient over random feasible pairs, ×1.5.
enum class LipschitzMode { kClosedForm, kEmpirical };

// The primal-dual VI equivalent of a ConstrainedProgram over z = (x; y):
// H_j(z) = ((Jh_j(x))ᵀy; -h_j(x)), ∇g_i(z) = (∇g_i(x); 0),
// 𝒵 = primal_set × [0, dual_cap]^ℓ.
struct KktProblem {
  CompositeVIProblem vi;
  double dual_cap = 0;
  int primal_dim = 0;
  int ell = 0;

  Vector primal(const Vector& z) const { return z.head(primal_dim); }
  Vector dual(const Vector& z) const { return z.tail(ell); }
};

// Builds the saddle VI. dual_cap is required (a too-small cap changes the
// solution, so there is no silent default); the caller must know y* fits.
KktProblem build_kkt_problem(const ConstrainedProgram& program, double dual_cap,
                             LipschitzMode mode = LipschitzMode::kClosedForm);

// F_μ(z) = F(z) + μz with the μz term folded into general component
// `attach_index` (its Lipschitz constant grows by μ); sets the problem's
// strong-monotonicity modulus to μ. μ = 0 returns an unchanged copy.
// Clears any reference solution (it belongs to the unperturbed problem).
CompositeVIProblem perturb(const CompositeVIProblem& problem, double mu, int attach_index = 0);

// ||max(0, Σ_j h_j(x))||_∞ — primal feasibility violation.
double constraint_violation(const ConstrainedProgram& program, const Vector& x);

// Σ g_i(x) - f_star.
double objective_gap(const ConstrainedProgram& program, const Vector& x, double f_star);

// Whether any dual coordinate of z sits at the cap (a sign dual_cap was too
// small and the KKT solution may be clipped).
bool dual_at_cap(const KktProblem& k, const Vector& z, double tol = 1e-9);

// Exact reference for small dense quadratic programs
//   min ½xᵀPx + qᵀx  s.t.  Ax ≤ b,  P ≻ 0,
// by enumerating active subsets of the (few) rows and solving the KKT
// equalities. Throws ConfigError beyond 12 rows or when no KKT point exists.
struct QpSolution {
  Vector x;
  Vector y;  // multipliers, one per row of A
  double value = 0;
};
QpSolution solve_qp_active_set(const Matrix& P, const Vector& q, const Matrix& A,
                               const Vector& b);

}  // namespace vrvi

#endif  // VRVI_CONSTRAINED_HPP_
