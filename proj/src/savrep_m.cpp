// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#include "vrvi/savrep_m.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace vrvi {

SavrepMSchedule savrep_m_schedule(std::int64_t s, const SavrepMParams& prm) {
  if (s < 0) throw ConfigError("savrep_m_schedule: epoch index must be nonnegative");
  SavrepMSchedule sc;
  sc.alpha = 2.0 / (s + 4.0);
  sc.beta = 0.5;
  double denom = 24.0 * (prm.L_g + (s + 1.0) * prm.L_h * std::sqrt(static_cast<double>(prm.m1)));
  if (prm.delta_cap > 0) {
    if (!(prm.omega_z > 0))
      throw ConfigError("savrep_m_schedule: omega_z required when delta_cap > 0");
    denom += (s + 1.0) * std::sqrt((s + 1.0) * prm.delta_cap * prm.m2) / prm.omega_z;
  }
  if (!(denom > 0))
    throw ConfigError("savrep_m_schedule: degenerate instance (L_h = L_g = delta_cap = 0)");
  sc.gamma = (s + 3.0) / denom;
  return sc;
}

SavrepMParams savrep_m_params_for(const CompositeVIProblem& p, double q) {
  SavrepMParams prm;
  prm.q = q;
  prm.m1 = p.h.size();
  prm.m2 = std::max(1, p.g.size());
  prm.p1 = p.h.empty() ? 1.0 : 1.0 / prm.m1;
  prm.L_h = p.L_h();
  prm.L_g = p.L_g();
  if (auto d = p.set.diameter()) prm.omega_z = *d;
  if (!p.noise_h.silent() || !p.noise_g.silent())
    prm.delta_cap = compute_theory_constants(p.h, p.g, p.noise_h, p.noise_g, q).delta_cap;
  if (!(prm.q > prm.p1 && prm.q < 1.0) && !p.h.empty())
    throw ConfigError("savrep_m_params_for: q must lie strictly between p1 and 1");
  return prm;
}

double savrep_m_capital_gamma(std::int64_t s) {
  if (s < 0) throw ConfigError("savrep_m_capital_gamma: epoch index must be nonnegative");
  double g = 1.0;
  for (std::int64_t t = 1; t <= s; ++t) g *= 1.0 - 2.0 / (t + 3.0);  // 1 - α_{t-1}
  return g;
}

ParamReport savrep_m_check_conditions(const SavrepMParams& prm, std::int64_t S) {
  if (S < 1) throw ConfigError("savrep_m_check_conditions: S >= 1 required");
  ParamReport rep;
  double inf = std::numeric_limits<double>::infinity();
  double c1 = inf, c2 = inf, c3 = inf, c4 = inf, c5 = inf;
  double prev_ratio = 0, prev_alpha = 0, prev_beta = 0;
  for (std::int64_t s = 0; s < S; ++s) {
    SavrepMSchedule sc = savrep_m_schedule(s, prm);
    c1 = std::min(c1, prm.p1 - 2.0 * sc.gamma * sc.gamma * prm.L_h * prm.L_h);
    c2 = std::min(c2, prm.q - prm.p1 -
                          sc.alpha * sc.gamma * prm.L_g * (1.0 + 1.0 / sc.beta));
    c3 = std::min(c3, 1.0 - sc.alpha - sc.beta);
    double ratio = sc.alpha / (sc.gamma * savrep_m_capital_gamma(s));
    if (s >= 1) {
      c4 = std::min(c4, ratio - prev_ratio);
      c5 = std::min(c5, (prev_alpha + prev_beta) - sc.beta / (1.0 - sc.alpha));
    }
    prev_ratio = ratio;
    prev_alpha = sc.alpha;
    prev_beta = sc.beta;
  }
  rep.checks.push_back({"p1 - 2 gamma^2 L_h^2 >= 0 (all epochs)", c1});
  rep.checks.push_back({"q - p1 - alpha gamma L_g (1 + 1/beta) >= 0 (all epochs)", c2});
  rep.checks.push_back({"1 - alpha - beta >= 0 (all epochs)", c3});
  rep.checks.push_back({"alpha/(gamma Gamma) nondecreasing", S >= 2 ? c4 : 0.0});
  rep.checks.push_back({"beta/(1-alpha) <= alpha_prev + beta_prev", S >= 2 ? c5 : 0.0});
  return rep;
}

double savrep_m_rate_envelope(std::int64_t k, const SavrepMParams& prm, double initial_gap) {
  if (k < 1) throw ConfigError("savrep_m_rate_envelope: k >= 1 required");
  double kk = static_cast<double>(k);
  double m2 = static_cast<double>(prm.m2);
  double om2 = prm.omega_z * prm.omega_z;
  return 24.0 * m2 * m2 / (kk * kk) * initial_gap + 48.0 * m2 / (kk * kk) * prm.L_g * om2 +
         48.0 / kk * prm.L_h * std::sqrt(static_cast<double>(prm.m1)) * om2 +
         26.0 * prm.omega_z * std::sqrt(prm.delta_cap) / std::sqrt(kk);
}

SavrepMSolver::SavrepMSolver(const CompositeVIProblem& problem, SavrepMParams params,
                             std::uint64_t seed, int batch)
    : p_(&problem),
      prm_(params),
      batch_(batch),
      h_idx_(seed, stream::kHIndex),
      g_idx_(seed, stream::kGIndex),
      h_coin_(seed, stream::kHCoin),
      h_noise_(seed, stream::kHNoise),
      g_noise_(seed, stream::kGNoise) {
  if (batch_ < 1) throw ConfigError("SavrepMSolver: batch must be >= 1");
  if (prm_.m2 < 1) throw ConfigError("SavrepMSolver: m2 must be >= 1");
  if (!(prm_.p1 > 0 && prm_.p1 <= 1)) throw ConfigError("SavrepMSolver: p1 must be in (0,1]");
  if (!p_->h.empty() && prm_.m1 != p_->h.size())
    throw ConfigError("SavrepMSolver: m1 does not match the general family size");
  if (!p_->g.empty() && prm_.m2 != p_->g.size())
    throw ConfigError("SavrepMSolver: m2 does not match the gradient family size");
  if (prm_.omega_z <= 0) {
    if (auto d = p_->set.diameter()) prm_.omega_z = *d;
  }
  if (prm_.delta_cap > 0 && !(prm_.omega_z > 0))
    throw ConfigError("SavrepMSolver: unbounded set with delta_cap > 0 needs an omega_z cap");
  st_.x = p_->start_point();
  st_.v = st_.x;
  st_.w = st_.x;
  st_.w_bar = st_.x;
  st_.v_buffer = Vector::Zero(st_.x.size());
}

void SavrepMSolver::ensure_caches() {
  if (st_.caches_ready) return;
  st_.h_cache = refresh_snapshot(p_->h, p_->noise_h, st_.w, h_noise_, ctr_.h_calls);
  st_.g_cache = refresh_snapshot(p_->g, p_->noise_g, st_.w_bar, g_noise_, ctr_.g_calls);
  st_.caches_ready = true;
}

Vector SavrepMSolver::estimate(const SnapshotCache& cache, const ComponentFamily& fam,
                               const NoiseModel& noise, CounterRng& idx_rng,
                               CounterRng& noise_rng, const Vector& at, const Vector& anchor,
                               std::int64_t& counter) {
  Vector acc = Vector::Zero(at.size());
  for (int b = 0; b < batch_; ++b) {
    int i = sample_component(fam, idx_rng);
    acc += vr_estimate(cache, fam, noise, i, at, anchor, noise_rng, counter);
  }
  return acc / batch_;
}

void SavrepMSolver::step() {
  ensure_caches();
  SavrepMSchedule sc = savrep_m_schedule(st_.epoch, prm_);
  const double a = sc.alpha, b = sc.beta, g = sc.gamma;
  Vector x_bar = (1.0 - prm_.p1) * st_.x + prm_.p1 * st_.w;
  Vector y = (1.0 - a - b) * st_.v + a * st_.x + b * st_.w_bar;

  Vector g_til = Vector::Zero(st_.x.size());
  if (!p_->g.empty())
    g_til = estimate(st_.g_cache, p_->g, p_->noise_g, g_idx_, g_noise_, y, st_.w_bar,
                     ctr_.g_calls);

  Vector x_half = p_->set.project(x_bar - g * (st_.h_cache.full_sum + g_til));

  Vector h_hat = Vector::Zero(st_.x.size());
  if (!p_->h.empty())
    h_hat = estimate(st_.h_cache, p_->h, p_->noise_h, h_idx_, h_noise_, x_half, st_.w,
                     ctr_.h_calls);

  Vector x_next = p_->set.project(x_bar - g * (h_hat + g_til));
  Vector v_next = (1.0 - a - b) * st_.v + a * x_half + b * st_.w_bar;

  if (!x_next.allFinite() || !v_next.allFinite())
    throw DivergenceError("savrep_m: non-finite iterate at iteration " + std::to_string(st_.iter),
                          st_.x, st_.iter);
  st_.x = std::move(x_next);
  st_.v = std::move(v_next);
  st_.v_buffer += st_.v;

  bool take_w = h_coin_.coin(prm_.p1);
  if (take_w) {
    st_.w = st_.x;
    st_.h_cache = refresh_snapshot(p_->h, p_->noise_h, st_.w, h_noise_, ctr_.h_calls);
  }
  if ((st_.iter + 1) % prm_.m2 == 0) {
    st_.w_bar = st_.v_buffer / static_cast<double>(prm_.m2);
    st_.g_cache = refresh_snapshot(p_->g, p_->noise_g, st_.w_bar, g_noise_, ctr_.g_calls);
    st_.v_buffer.setZero();
    ++st_.epoch;
  }
  ++st_.iter;
}

RunResult SavrepMSolver::run(const RunControl& rc, const TraceSink& sink) {
  RunResult out;
  MetricsEval metrics(*p_);
  const bool stop_on_gap = rc.tol > 0 && metrics.has_reference();
  const bool stop_on_res = rc.tol > 0 && !metrics.has_reference() && p_->exact_available();
  std::int64_t log_every = rc.log_interval > 0 ? rc.log_interval : 1;  // epochs
  auto t0 = std::chrono::steady_clock::now();
  auto emit = [&](void) {
    TraceRecord t;
    t.iter = st_.iter;
    t.epoch = st_.epoch;
    t.oracle_h_calls = ctr_.h_calls;
    t.oracle_g_calls = ctr_.g_calls;
    metrics.fill(t, st_.w_bar);
    t.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
    out.traces.push_back(t);
    if (sink) sink(t);
  };
  emit();
  while (ctr_.total() < rc.budget) {
    step();
    if (st_.iter % prm_.m2 != 0) continue;  // log at epoch boundaries only
    if (st_.epoch % log_every != 0) continue;
    emit();
    const TraceRecord& last = out.traces.back();
    if (stop_on_gap && last.q_gap <= rc.tol) out.converged = true;
    if (stop_on_res && last.res_norm <= rc.tol) out.converged = true;
    if (out.converged) break;
  }
  if (out.traces.back().iter != st_.iter) emit();
  out.final_point = st_.w_bar;
  out.counters = ctr_;
  return out;
}

}  // namespace vrvi
