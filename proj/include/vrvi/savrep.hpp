// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#ifndef VRVI_SAVREP_HPP_
#define VRVI_SAVREP_HPP_

#include <string>
#include <utility>
#include <vector>

#include "vrvi/problem.hpp"
#include "vrvi/rng.hpp"
#include "vrvi/run.hpp"

namespace vrvi {

// Step-size/averaging parameters of the strongly monotone solver.
struct SavrepParams {
  double gamma = 0;
  double alpha = 0;
  double beta = 0;
  double phi = 0;
  double p1 = 0;  // snapshot refresh probability for w
  double p2 = 0;  // snapshot refresh probability for w̄
  double mu_h = 0;
};

// One named inequality with its slack (negative = violated).
struct ParamCheck {
  std::string name;
  double slack = 0;
  bool ok() const { return slack >= 0; }
};

struct ParamReport {
  std::vector<ParamCheck> checks;
  bool ok() const;
  // Comma-separated names of violated inequalities (empty when ok).
  std::string violations() const;
};

// Closed-form parameter selection:
//   p1 = 1/m1, p2 = 1/m2, β = 1/2, φ = (1+α)m2/2,
//   γ = ¼ min(√p1/L_h, √(p2/(L_g μ_h)), p1/μ_h), α = 1/12 min(√(μ_h/(L_g p2)), 1).
// Throws ConfigError naming the violated inequality if the result fails
// check_param_constraints (cannot happen for valid inputs; defensive).
SavrepParams savrep_default_params(double mu_h, double L_h, double L_g, int m1, int m2);

// The solver's feasibility inequalities:
//   1 - α - β ≥ 0,
//   p1 - 2γ²L_h² - γμ_h/3 ≥ 0,
//   1 - p1 - 19γμ_h/12 - αγL_g - αγL_g/β ≥ 0,
// plus basic range checks. Report-style: never throws.
ParamReport check_param_constraints(const SavrepParams& prm, double L_h, double L_g);

// Worst-case per-iteration contraction factor of the tracked potential:
// max of the five closed-form terms; always in (0,1) for valid inputs.
double savrep_contraction_factor(const SavrepParams& prm, double mu_h, double L_h, double L_g,
                                 int m1, int m2);

// Stochastic-error floor terms (Δ_h, Δ_g) entering the plateau level:
//   Δ_h = (α/μ_h)(m1 σ_h² + m1² δ_h²) + 2αγ σ̃_h²,
//   Δ_g = (16α/μ_h)(m2 σ_g² + m2² δ_g²) + (16α/μ_h) σ̃_g².
std::pair<double, double> savrep_noise_floor(const SavrepParams& prm, int m1, int m2,
                                             const NoiseModel& noise_h, const NoiseModel& noise_g,
                                             const TheoryConstants& tc);

struct SavrepState {
  Vector x, v, w, w_bar;
  SnapshotCache h_cache, g_cache;
  bool caches_ready = false;
  std::int64_t iter = 0;
  std::int64_t epoch = 0;  // number of w̄ refreshes
};

// The strongly monotone solver. One instance is single-threaded and owns its
// RNG streams; distinct instances (different seeds) may run concurrently on a
// shared read-only problem.
class SavrepSolver {
 public:
  SavrepSolver(const CompositeVIProblem& problem, SavrepParams params, std::uint64_t seed,
               int batch = 1);

  // One iteration, in update order: x̄, y, ζ-draw + g-estimate, half step,
  // ξ-draw + H-estimate, full step, v-update, w coin (+ h refresh),
  // w̄ coin (+ g refresh). Throws DivergenceError on non-finite iterates.
  void step();

  RunResult run(const RunControl& rc, const TraceSink& sink = nullptr);

  const SavrepState& state() const { return st_; }
  SavrepState& mutable_state() { return st_; }
  const OracleCounter& counters() const { return ctr_; }
  const SavrepParams& params() const { return prm_; }

 private:
  void ensure_caches();
  Vector estimate(const SnapshotCache& cache, const ComponentFamily& fam, const NoiseModel& noise,
                  CounterRng& idx_rng, CounterRng& noise_rng, const Vector& at,
                  const Vector& anchor, std::int64_t& counter);

  const CompositeVIProblem* p_;
  SavrepParams prm_;
  int batch_;
  SavrepState st_;
  OracleCounter ctr_;
  CounterRng h_idx_, g_idx_, h_coin_, g_coin_, h_noise_, g_noise_;
};

// Theorem-style potential at the current state:
//   (1-φp2)·Q(v;x*) + φ·Q(w̄;x*) + (α/2γ)[(1-p1)||x-x*||² + ||w-x*||²].
double savrep_potential(const SavrepState& st, const SavrepParams& prm, const GapEvaluator& gap);

}  // namespace vrvi

#endif  // VRVI_SAVREP_HPP_
