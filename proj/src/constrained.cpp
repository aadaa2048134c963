// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#include "vrvi/constrained.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <utility>

#include "vrvi/rng.hpp"

namespace vrvi {

namespace {

// Max difference quotient of `map` over random feasible pairs, inflated 1.5x
// to keep downstream step-size conditions conservative.
double empirical_lipschitz(const std::function<Vector(const Vector&)>& map,
                           const ConstraintSet& set, int pairs) {
  CounterRng rng(0x11757ULL, stream::kInit);
  double rate = 0;
  int n = set.dim();
  for (int k = 0; k < pairs; ++k) {
    double scale = (k % 3 == 0) ? 0.1 : (k % 3 == 1) ? 1.0 : 10.0;
    Vector z1 = set.project(scale * rng.gaussian(n));
    Vector z2 = set.project(scale * rng.gaussian(n));
    double d = (z1 - z2).norm();
    if (d < 1e-12) continue;
    rate = std::max(rate, (map(z1) - map(z2)).norm() / d);
  }
  return 1.5 * rate;
}

}  // namespace

KktProblem build_kkt_problem(const ConstrainedProgram& program, double dual_cap,
                             LipschitzMode mode) {
  if (!(dual_cap > 0)) throw ConfigError("build_kkt_problem: dual_cap must be positive");
  if (program.constraints.empty())
    throw ConfigError("build_kkt_problem: at least one constraint block required");
  if (program.ell < 1) throw ConfigError("build_kkt_problem: ell must be >= 1");
  const int n = program.dim();
  const int ell = program.ell;
  const int nz = n + ell;

  KktProblem k;
  k.dual_cap = dual_cap;
  k.primal_dim = n;
  k.ell = ell;
  k.vi.set = ConstraintSet::product(
      {program.primal_set,
       ConstraintSet::box(Vector::Zero(ell), Vector::Constant(ell, dual_cap))});

  k.vi.h = ComponentFamily(nz);
  for (const auto& blk : program.constraints) {
    if (!blk.value || !blk.jacobian)
      throw ConfigError("build_kkt_problem: constraint block missing value or jacobian");
    auto saddle = [blk, n, ell](const Vector& z) -> Vector {
      Vector x = z.head(n), y = z.tail(ell);
      Vector hx = blk.value(x);
      if (hx.size() != ell) throw ConfigError("build_kkt_problem: constraint row count != ell");
      Matrix J = blk.jacobian(x);
      if (J.rows() != ell || J.cols() != n)
        throw ConfigError("build_kkt_problem: jacobian shape mismatch");
      Vector out(n + ell);
      out.head(n) = J.transpose() * y;
      out.tail(ell) = -hx;
      return out;
    };
    double L = blk.lipschitz;
    if (L <= 0) {
      if (mode == LipschitzMode::kClosedForm)
        throw ConfigError(
            "build_kkt_problem: closed-form mode requires per-block Lipschitz constants");
      L = empirical_lipschitz(saddle, k.vi.set, 10000);
      if (L <= 0) L = 1.0;  // constant block; any positive constant is valid
    }
    Component c;
    c.exact = saddle;
    k.vi.h.add(std::move(c), L);
  }

  k.vi.g = ComponentFamily(nz);
  for (const auto& oc : program.objective) {
    if (!oc.value || !oc.gradient)
      throw ConfigError("build_kkt_problem: objective component missing value or gradient");
    auto grad = [oc, n, ell](const Vector& z) -> Vector {
      Vector out = Vector::Zero(n + ell);
      out.head(n) = oc.gradient(z.head(n));
      return out;
    };
    double L = oc.lipschitz;
    if (L <= 0) {
      if (mode == LipschitzMode::kClosedForm)
        throw ConfigError(
            "build_kkt_problem: closed-form mode requires per-component Lipschitz constants");
      L = empirical_lipschitz(grad, k.vi.set, 10000);
      if (L <= 0) L = 1.0;
    }
    Component c;
    c.exact = grad;
    c.value = [oc, n](const Vector& z) { return oc.value(z.head(n)); };
    k.vi.g.add(std::move(c), L);
  }

  auto blocks = program.constraints;
  k.vi.cons_viol = [blocks, n, ell](const Vector& z) {
    Vector sum = Vector::Zero(ell);
    for (const auto& blk : blocks) sum += blk.value(z.head(n));
    return std::max(0.0, sum.maxCoeff());
  };
  return k;
}

CompositeVIProblem perturb(const CompositeVIProblem& problem, double mu, int attach_index) {
  if (mu < 0) throw ConfigError("perturb: mu must be nonnegative");
  if (mu == 0) return problem;
  if (problem.h.empty() || attach_index < 0 || attach_index >= problem.h.size())
    throw ConfigError("perturb: attach_index outside the general component family");
  CompositeVIProblem out;
  out.h = ComponentFamily(problem.h.dim());
  for (int i = 0; i < problem.h.size(); ++i) {
    Component c = problem.h.component(i);
    double L = problem.h.lipschitz()[i];
    if (i == attach_index) {
      if (c.exact) {
        auto e = c.exact;
        c.exact = [e, mu](const Vector& z) -> Vector { return e(z) + mu * z; };
      }
      if (c.sample) {
        auto s = c.sample;
        c.sample = [s, mu](const Vector& z, CounterRng& rng) -> Vector {
          return s(z, rng) + mu * z;
        };
      }
      L += mu;
    }
    out.h.add(std::move(c), L);
  }
  out.g = problem.g;
  out.set = problem.set;
  out.mu_h = mu;
  out.noise_h = problem.noise_h;
  out.noise_g = problem.noise_g;
  out.x0 = problem.x0;
  out.cons_viol = problem.cons_viol;
  // x_star / f_star stay empty: they describe the unperturbed problem.
  return out;
}

double constraint_violation(const ConstrainedProgram& program, const Vector& x) {
  if (program.constraints.empty()) return 0.0;
  Vector sum = Vector::Zero(program.ell);
  for (const auto& blk : program.constraints) sum += blk.value(x);
  return std::max(0.0, sum.maxCoeff());
}

double objective_gap(const ConstrainedProgram& program, const Vector& x, double f_star) {
  double v = 0;
  for (const auto& oc : program.objective) v += oc.value(x);
  return v - f_star;
}

bool dual_at_cap(const KktProblem& k, const Vector& z, double tol) {
  return (k.dual(z).array() >= k.dual_cap - tol).any();
}

QpSolution solve_qp_active_set(const Matrix& P, const Vector& q, const Matrix& A,
                               const Vector& b) {
  const int n = static_cast<int>(P.rows());
  const int rows = static_cast<int>(A.rows());
  if (P.cols() != n || q.size() != n) throw ConfigError("solve_qp_active_set: P/q shape mismatch");
  if (A.cols() != n || b.size() != rows)
    throw ConfigError("solve_qp_active_set: A/b shape mismatch");
  if (rows > 12) throw ConfigError("solve_qp_active_set: enumeration limited to 12 rows");
  const double tol = 1e-9;
  bool found = false;
  QpSolution best;
  best.value = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << rows); ++mask) {
    std::vector<int> act;
    for (int r = 0; r < rows; ++r)
      if (mask & (1u << r)) act.push_back(r);
    const int s = static_cast<int>(act.size());
    Matrix K = Matrix::Zero(n + s, n + s);
    K.topLeftCorner(n, n) = P;
    Vector rhs(n + s);
    rhs.head(n) = -q;
    for (int r = 0; r < s; ++r) {
      K.block(n + r, 0, 1, n) = A.row(act[r]);
      K.block(0, n + r, n, 1) = A.row(act[r]).transpose();
      rhs[n + r] = b[act[r]];
    }
    Eigen::FullPivLU<Matrix> lu(K);
    if (!lu.isInvertible()) continue;  // dependent active rows
    Vector sol = lu.solve(rhs);
    Vector x = sol.head(n);
    Vector lam = sol.tail(s);
    if ((lam.array() < -tol).any()) continue;
    if (rows > 0 && ((A * x - b).array() > tol).any()) continue;
    double val = 0.5 * x.dot(P * x) + q.dot(x);
    if (!found || val < best.value) {
      found = true;
      best.x = x;
      best.y = Vector::Zero(rows);
      for (int r = 0; r < s; ++r) best.y[act[r]] = std::max(0.0, lam[r]);
      best.value = val;
    }
  }
  if (!found) throw ConfigError("solve_qp_active_set: no KKT point found");
  return best;
}

}  // namespace vrvi
