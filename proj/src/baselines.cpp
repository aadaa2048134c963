// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#include "vrvi/baselines.hpp"

#include <limits>

#include "vrvi/rng.hpp"

namespace vrvi {

namespace {

double resolve_step(const CompositeVIProblem& p, const ExtragradientParams& prm) {
  double L = p.L_h() + p.L_g();
  if (prm.step > 0) {
    if (L > 0 && prm.step > 1.0 / L + 1e-15)
      throw ConfigError("baseline: step exceeds 1/(L_h + L_g)");
    return prm.step;
  }
  return L > 0 ? 1.0 / L : 1.0;
}

double natural_residual(const CompositeVIProblem& p, const Vector& x, double tau) {
  return (x - p.set.project(x - tau * p.exact_full(x))).norm() / tau;
}

}  // namespace

BaselineResult solve_extragradient(const CompositeVIProblem& p, const ExtragradientParams& prm,
                                   const TraceSink& sink, std::int64_t log_interval) {
  if (!p.exact_available())
    throw ConfigError("solve_extragradient: exact operator evaluations required");
  if (!(prm.tol > 0)) throw ConfigError("solve_extragradient: tol must be positive");
  if (prm.max_iters < 1) throw ConfigError("solve_extragradient: max_iters must be >= 1");
  double tau = resolve_step(p, prm);
  std::int64_t m1 = static_cast<std::int64_t>(p.h.size());
  std::int64_t m2 = static_cast<std::int64_t>(p.g.size());
  std::int64_t li = log_interval > 0 ? log_interval : std::max<std::int64_t>(1, m1 + m2);
  MetricsEval metrics(p);
  auto emit = [&](std::int64_t k, const Vector& z) {
    if (!sink) return;
    TraceRecord rec;
    rec.iter = k;
    rec.epoch = 0;
    rec.oracle_h_calls = 2 * k * m1;
    rec.oracle_g_calls = 2 * k * m2;
    metrics.fill(rec, z);
    sink(rec);
  };
  BaselineResult best;
  best.x = p.set.project(p.start_point());
  best.residual = natural_residual(p, best.x, tau);
  Vector x = best.x;
  emit(0, x);
  std::int64_t last_emit = 0;
  for (std::int64_t k = 0; k < prm.max_iters; ++k) {
    if (best.residual <= prm.tol) {
      best.converged = true;
      break;
    }
    Vector y = p.set.project(x - tau * p.exact_full(x));
    x = p.set.project(x - tau * p.exact_full(y));
    double r = natural_residual(p, x, tau);
    if (r < best.residual) {
      best.residual = r;
      best.x = x;
    }
    best.iters = k + 1;
    if (best.iters % li == 0) {
      emit(best.iters, x);
      last_emit = best.iters;
    }
  }
  best.converged = best.residual <= prm.tol;
  if (best.iters != last_emit) emit(best.iters, best.x);
  return best;
}

BaselineResult solve_projected_gradient(const CompositeVIProblem& p,
                                        const ExtragradientParams& prm) {
  if (!p.h.empty())
    throw ConfigError("solve_projected_gradient: general components present; use extragradient");
  if (!p.exact_available())
    throw ConfigError("solve_projected_gradient: exact gradient evaluations required");
  if (!(prm.tol > 0)) throw ConfigError("solve_projected_gradient: tol must be positive");
  if (prm.max_iters < 1) throw ConfigError("solve_projected_gradient: max_iters must be >= 1");
  double tau = resolve_step(p, prm);
  BaselineResult best;
  best.x = p.set.project(p.start_point());
  best.residual = natural_residual(p, best.x, tau);
  Vector x = best.x;
  for (std::int64_t k = 0; k < prm.max_iters; ++k) {
    if (best.residual <= prm.tol) {
      best.converged = true;
      return best;
    }
    x = p.set.project(x - tau * p.exact_full(x));
    double r = natural_residual(p, x, tau);
    if (r < best.residual) {
      best.residual = r;
      best.x = x;
    }
    best.iters = k + 1;
  }
  best.converged = best.residual <= prm.tol;
  return best;
}

double vi_certificate(const CompositeVIProblem& p, const Vector& x_star, int samples,
                      std::uint64_t seed) {
  if (samples < 1) throw ConfigError("vi_certificate: samples must be positive");
  Vector f = p.exact_full(x_star);
  CounterRng rng(seed, stream::kInit);
  double worst = std::numeric_limits<double>::infinity();
  // Feasible probes at several scales around the candidate, plus the origin
  // projection, so both near-solution and far-field directions are covered.
  for (int k = 0; k < samples; ++k) {
    double scale = (k % 3 == 0) ? 0.1 : (k % 3 == 1) ? 1.0 : 10.0;
    Vector z = p.set.project(x_star + scale * rng.gaussian(static_cast<int>(x_star.size())));
    worst = std::min(worst, f.dot(z - x_star));
  }
  worst = std::min(worst, f.dot(p.set.project(Vector::Zero(x_star.size())) - x_star));
  return worst;
}

}  // namespace vrvi
