// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#include "vrvi/zeroth_order.hpp"

#include <cmath>
#include <utility>

namespace vrvi {

Vector zo_gradient(const NoisyScalarOracle& oracle, const Vector& x, double phi, const Vector& u,
                   CounterRng& rng) {
  if (!(phi > 0)) throw ConfigError("zo_gradient: phi must be positive");
  if (!oracle.value) throw ConfigError("zo_gradient: oracle has no value function");
  if (std::abs(u.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("zo_gradient: direction must be unit-norm");
  double eta = rng.normal();  // one realization, shared by both evaluations
  double f1 = oracle.eval(x + phi * u, eta);
  double f0 = oracle.eval(x, eta);
  double n = static_cast<double>(x.size());
  return (n / phi) * (f1 - f0) * u;
}

double smoothing_bias_bound(double gradient_lipschitz, double phi, int n) {
  return 0.5 * phi * n * gradient_lipschitz;
}

double zo_variance_bound(double value_lipschitz, double varsigma, double gradient_lipschitz,
                         double phi, int n) {
  double m2 = value_lipschitz * value_lipschitz + varsigma * varsigma;
  double l2 = gradient_lipschitz * gradient_lipschitz;
  return 2.0 * n * m2 + 0.5 * phi * phi * static_cast<double>(n) * n * l2;
}

ZoOracleBounds zo_kkt_bounds(const ZeroOrderProgram& program, const SmoothingConfig& cfg,
                             double dual_cap) {
  if (!(cfg.phi > 0)) throw ConfigError("zo_kkt_bounds: phi must be positive");
  ZoOracleBounds b;
  int n = cfg.dim;
  double worst_row_var = 0, worst_noise = 0;
  for (const auto& blk : program.constraints) {
    double sum_l2 = 0;
    for (const auto& row : blk.rows) {
      sum_l2 += row.gradient_lipschitz * row.gradient_lipschitz;
      worst_row_var = std::max(worst_row_var,
                               zo_variance_bound(row.value_lipschitz, row.noise_std,
                                                 row.gradient_lipschitz, cfg.phi, n));
      worst_noise = std::max(worst_noise, row.noise_std);
    }
    b.delta_h = std::max(b.delta_h, 0.5 * cfg.phi * n * dual_cap * std::sqrt(sum_l2));
  }
  double ell = static_cast<double>(program.ell);
  b.sigma_h_sq = ell * (worst_row_var * dual_cap * dual_cap + worst_noise * worst_noise);
  for (const auto& oc : program.objective) {
    b.delta_g = std::max(b.delta_g, smoothing_bias_bound(oc.gradient_lipschitz, cfg.phi, n));
    b.sigma_g_sq = std::max(b.sigma_g_sq, zo_variance_bound(oc.value_lipschitz, oc.noise_std,
                                                            oc.gradient_lipschitz, cfg.phi, n));
  }
  return b;
}

KktProblem zo_kkt_operator_components(const ZeroOrderProgram& program, const SmoothingConfig& cfg,
                                      double dual_cap) {
  if (!(dual_cap > 0)) throw ConfigError("zo_kkt: dual_cap must be positive");
  if (!(cfg.phi > 0)) throw ConfigError("zo_kkt: phi must be positive");
  if (program.constraints.empty()) throw ConfigError("zo_kkt: at least one constraint block");
  if (program.ell < 1) throw ConfigError("zo_kkt: ell must be >= 1");
  const int n = program.primal_set.dim();
  if (cfg.dim != n) throw ConfigError("zo_kkt: smoothing dim does not match primal set");
  const int ell = program.ell;
  const int nz = n + ell;
  const double phi = cfg.phi;

  KktProblem k;
  k.dual_cap = dual_cap;
  k.primal_dim = n;
  k.ell = ell;
  k.vi.set = ConstraintSet::product(
      {program.primal_set,
       ConstraintSet::box(Vector::Zero(ell), Vector::Constant(ell, dual_cap))});

  k.vi.h = ComponentFamily(nz);
  for (const auto& blk : program.constraints) {
    if (static_cast<int>(blk.rows.size()) != ell)
      throw ConfigError("zo_kkt: constraint block row count != ell");
    if (!(blk.lipschitz > 0))
      throw ConfigError("zo_kkt: constraint blocks need explicit Lipschitz constants");
    for (const auto& row : blk.rows)
      if (!row.value) throw ConfigError("zo_kkt: constraint row missing value oracle");
    Component c;
    c.sample = [blk, n, ell, phi](const Vector& z, CounterRng& rng) -> Vector {
      Vector x = z.head(n), y = z.tail(ell);
      Vector u = rng.sphere(n);
      double nn = static_cast<double>(n);
      Vector out(n + ell);
      // Primal block: H'_{j,phi}(x,u) y = Σ_s y_s c_s u, one u for all rows,
      // each row's slope built from a single shared noise realization.
      double weighted = 0;
      Vector xp = x + phi * u;
      for (int s = 0; s < ell; ++s) {
        double eta = rng.normal();
        double slope = (nn / phi) * (blk.rows[s].eval(xp, eta) - blk.rows[s].eval(x, eta));
        weighted += y[s] * slope;
      }
      out.head(n) = weighted * u;
      // Dual block: -h'_j(x) with fresh realizations.
      for (int s = 0; s < ell; ++s) out[n + s] = -blk.rows[s].eval(x, rng.normal());
      return out;
    };
    k.vi.h.add(std::move(c), blk.lipschitz);
  }

  k.vi.g = ComponentFamily(nz);
  for (const auto& oc : program.objective) {
    if (!oc.value) throw ConfigError("zo_kkt: objective component missing value oracle");
    if (!(oc.gradient_lipschitz > 0))
      throw ConfigError("zo_kkt: objective components need explicit smoothness constants");
    Component c;
    c.sample = [oc, n, ell, phi](const Vector& z, CounterRng& rng) -> Vector {
      Vector x = z.head(n);
      Vector u = rng.sphere(n);
      Vector g = zo_gradient(oc, x, phi, u, rng);
      Vector out = Vector::Zero(n + ell);
      out.head(n) = g;
      return out;
    };
    c.value = [oc, n](const Vector& z) { return oc.value(z.head(n)); };
    k.vi.g.add(std::move(c), oc.gradient_lipschitz);
  }

  auto blocks = program.constraints;
  k.vi.cons_viol = [blocks, n, ell](const Vector& z) {
    Vector sum = Vector::Zero(ell);
    for (const auto& blk : blocks)
      for (int s = 0; s < ell; ++s) sum[s] += blk.rows[s].value(z.head(n));
    return std::max(0.0, sum.maxCoeff());
  };
  return k;
}

}  // namespace vrvi
