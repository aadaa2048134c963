// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#ifndef VRVI_SAVREP_M_HPP_
#define VRVI_SAVREP_M_HPP_

#include <cstdint>

#include "vrvi/problem.hpp"
#include "vrvi/rng.hpp"
#include "vrvi/run.hpp"
#include "vrvi/savrep.hpp"

namespace vrvi {

// Constants of the merely monotone (epoch-averaged) solver. q is an analysis
// trade-off constant in (p1, 1); omega_z caps the feasible-set diameter Ω;
// delta_cap is the aggregated stochastic-error constant Δ (0 when noiseless).
struct SavrepMParams {
  double q = 0.75;
  double p1 = 0;        // snapshot refresh probability for w
  double omega_z = 0;   // Ω; 0 = take the constraint-set diameter
  double delta_cap = 0; // Δ
  double L_h = 0;
  double L_g = 0;
  int m1 = 0;
  int m2 = 1;
};

struct SavrepMSchedule {
  double alpha = 0;
  double beta = 0;
  double gamma = 0;
};

// Per-epoch parameters:
//   α_s = 2/(s+4), β_s = 1/2,
//   γ_s = (s+3) / (24(L_g + (s+1)L_h√m1) + (s+1)√((s+1)·Δ·m2)/Ω).
// Throws ConfigError when Δ > 0 but no Ω is available.
SavrepMSchedule savrep_m_schedule(std::int64_t s, const SavrepMParams& prm);

// Fills derived fields from the problem: L_h/L_g/m1/m2 from the families,
// p1 = 1/m1 (1 when the general family is empty), Ω from the set diameter
// unless already supplied, Δ from the noise constants when noise is present.
SavrepMParams savrep_m_params_for(const CompositeVIProblem& p, double q = 0.75);

// Π(1 - α) over completed epochs: Γ_0 = 1, Γ_s = (1 - α_{s-1}) Γ_{s-1}.
double savrep_m_capital_gamma(std::int64_t s);

// The solver's feasibility inequalities, verified over epochs s = 0..S-1
// (each check row reports the minimum slack across epochs):
//   p1 - 2γ_s²L_h² ≥ 0,
//   q - p1 - α_s γ_s L_g (1 + 1/β_s) ≥ 0,
//   1 - α_s - β_s ≥ 0,
//   α/(γΓ) nondecreasing in s,
//   β_s/(1-α_s) ≤ α_{s-1} + β_{s-1}.
// Report-style: never throws.
ParamReport savrep_m_check_conditions(const SavrepMParams& prm, std::int64_t S);

// Theoretical bound on the epoch-average gap at inner iteration k:
//   24 m2²/k² · Q(w̄⁰;x*) + 48 m2/k² · L_g Ω² + 48/k · L_h √m1 Ω² + 26 Ω √Δ/√k.
double savrep_m_rate_envelope(std::int64_t k, const SavrepMParams& prm, double initial_gap);

struct SavrepMState {
  Vector x, v, w, w_bar;
  Vector v_buffer;  // running sum of v over the current epoch
  SnapshotCache h_cache, g_cache;
  bool caches_ready = false;
  std::int64_t iter = 0;
  std::int64_t epoch = 0;  // s = ⌊iter/m2⌋
};

// Epoch-averaged solver for merely monotone problems. The convergence-measure
// iterate is w̄ (the mean of the last m2 v-iterates), refreshed whenever
// m2 | (iter+1); the general-family snapshot anchor w still refreshes by coin.
class SavrepMSolver {
 public:
  SavrepMSolver(const CompositeVIProblem& problem, SavrepMParams params, std::uint64_t seed,
                int batch = 1);

  // One iteration with the current epoch's (α, β, γ); same update order as
  // the strongly monotone solver except the deterministic w̄ line.
  void step();

  // Logs at epoch boundaries (log_interval counts epochs; 0 = every epoch),
  // metrics evaluated at w̄. tol > 0 stops on q_gap(w̄) when a reference is
  // available, else on the residual at w̄.
  RunResult run(const RunControl& rc, const TraceSink& sink = nullptr);

  const SavrepMState& state() const { return st_; }
  SavrepMState& mutable_state() { return st_; }
  const OracleCounter& counters() const { return ctr_; }
  const SavrepMParams& params() const { return prm_; }

 private:
  void ensure_caches();
  Vector estimate(const SnapshotCache& cache, const ComponentFamily& fam, const NoiseModel& noise,
                  CounterRng& idx_rng, CounterRng& noise_rng, const Vector& at,
                  const Vector& anchor, std::int64_t& counter);

  const CompositeVIProblem* p_;
  SavrepMParams prm_;
  int batch_;
  SavrepMState st_;
  OracleCounter ctr_;
  CounterRng h_idx_, g_idx_, h_coin_, h_noise_, g_noise_;
};

}  // namespace vrvi

#endif  // VRVI_SAVREP_M_HPP_
