// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#include "vrvi/savrep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace vrvi {

bool ParamReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const ParamCheck& c) { return c.ok(); });
}

std::string ParamReport::violations() const {
  std::string out;
  for (const auto& c : checks) {
    if (c.ok()) continue;
    if (!out.empty()) out += ", ";
    out += c.name;
  }
  return out;
}

SavrepParams savrep_default_params(double mu_h, double L_h, double L_g, int m1, int m2) {
  if (!(mu_h > 0)) throw ConfigError("savrep_default_params: mu_h must be positive");
  if (m1 < 2) throw ConfigError("savrep_default_params: m1 >= 2 required");
  if (m2 < 1) throw ConfigError("savrep_default_params: m2 >= 1 required");
  if (L_h < mu_h) throw ConfigError("savrep_default_params: L_h >= mu_h required");
  SavrepParams prm;
  prm.mu_h = mu_h;
  prm.p1 = 1.0 / m1;
  prm.p2 = 1.0 / m2;
  double inf = std::numeric_limits<double>::infinity();
  double t1 = L_h > 0 ? std::sqrt(prm.p1) / L_h : inf;
  double t2 = L_g > 0 ? std::sqrt(prm.p2 / (L_g * mu_h)) : inf;
  prm.gamma = 0.25 * std::min({t1, t2, prm.p1 / mu_h});
  double a1 = L_g > 0 ? std::sqrt(mu_h / (L_g * prm.p2)) : inf;
  prm.alpha = (1.0 / 12.0) * std::min(a1, 1.0);
  prm.beta = 0.5;
  prm.phi = (1.0 + prm.alpha) * m2 / 2.0;
  ParamReport rep = check_param_constraints(prm, L_h, L_g);
  if (!rep.ok())
    throw ConfigError("savrep_default_params: violated constraint(s): " + rep.violations());
  return prm;
}

ParamReport check_param_constraints(const SavrepParams& prm, double L_h, double L_g) {
  ParamReport rep;
  rep.checks.push_back({"gamma > 0", prm.gamma > 0 ? prm.gamma : -1.0});
  rep.checks.push_back({"0 < p1 <= 1", (prm.p1 > 0 && prm.p1 <= 1) ? prm.p1 : -1.0});
  rep.checks.push_back({"0 < p2 <= 1", (prm.p2 > 0 && prm.p2 <= 1) ? prm.p2 : -1.0});
  rep.checks.push_back({"mu_h > 0", prm.mu_h > 0 ? prm.mu_h : -1.0});
  rep.checks.push_back({"beta > 0", prm.beta > 0 ? prm.beta : -1.0});
  rep.checks.push_back({"1 - alpha - beta >= 0", 1.0 - prm.alpha - prm.beta});
  rep.checks.push_back({"p1 - 2 gamma^2 L_h^2 - gamma mu_h / 3 >= 0",
                        prm.p1 - 2.0 * prm.gamma * prm.gamma * L_h * L_h -
                            prm.gamma * prm.mu_h / 3.0});
  rep.checks.push_back(
      {"1 - p1 - 19 gamma mu_h / 12 - alpha gamma L_g (1 + 1/beta) >= 0",
       1.0 - prm.p1 - 19.0 * prm.gamma * prm.mu_h / 12.0 - prm.alpha * prm.gamma * L_g -
           (prm.beta > 0 ? prm.alpha * prm.gamma * L_g / prm.beta : 0.0)});
  return rep;
}

double savrep_contraction_factor(const SavrepParams& prm, double mu_h, double L_h, double L_g,
                                 int m1, int m2) {
  (void)prm;  // validity is the caller's contract; the factor is instance-determined
  double inf = std::numeric_limits<double>::infinity();
  double sm1 = std::sqrt(static_cast<double>(m1));
  double t1 = L_g > 0 ? 1.0 - std::sqrt(mu_h) / (24.0 * std::sqrt(L_g * m2)) : inf;
  double t2 = 1.0 - 1.0 / (24.0 * m2);
  double t3 = L_h > 0 ? 1.0 - mu_h / (48.0 * L_h * sm1) : inf;
  double t4 = L_g > 0 ? 1.0 - std::sqrt(mu_h) / (48.0 * std::sqrt(L_g * m2)) : inf;
  double t5 = 1.0 - 1.0 / (48.0 * m1);
  // Degenerate families (L = 0) drop their terms from the max.
  double c = -inf;
  for (double t : {t1, t2, t3, t4, t5})
    if (t < inf) c = std::max(c, t);
  return c;
}

std::pair<double, double> savrep_noise_floor(const SavrepParams& prm, int m1, int m2,
                                             const NoiseModel& noise_h, const NoiseModel& noise_g,
                                             const TheoryConstants& tc) {
  double sh2 = noise_h.std * noise_h.std, dh2 = noise_h.bias_norm * noise_h.bias_norm;
  double sg2 = noise_g.std * noise_g.std, dg2 = noise_g.bias_norm * noise_g.bias_norm;
  double dh = (prm.alpha / prm.mu_h) * (m1 * sh2 + static_cast<double>(m1) * m1 * dh2) +
              2.0 * prm.alpha * prm.gamma * tc.sigma_h_tilde_sq;
  double dg = (16.0 * prm.alpha / prm.mu_h) * (m2 * sg2 + static_cast<double>(m2) * m2 * dg2) +
              (16.0 * prm.alpha / prm.mu_h) * tc.sigma_g_tilde_sq;
  return {dh, dg};
}

SavrepSolver::SavrepSolver(const CompositeVIProblem& problem, SavrepParams params,
                           std::uint64_t seed, int batch)
    : p_(&problem),
      prm_(params),
      batch_(batch),
      h_idx_(seed, stream::kHIndex),
      g_idx_(seed, stream::kGIndex),
      h_coin_(seed, stream::kHCoin),
      g_coin_(seed, stream::kGCoin),
      h_noise_(seed, stream::kHNoise),
      g_noise_(seed, stream::kGNoise) {
  if (batch_ < 1) throw ConfigError("SavrepSolver: batch must be >= 1");
  if (!(prm_.gamma > 0) || !(prm_.p1 > 0 && prm_.p1 <= 1) || !(prm_.p2 > 0 && prm_.p2 <= 1))
    throw ConfigError("SavrepSolver: invalid parameters (gamma, p1, p2)");
  st_.x = p_->start_point();
  // v⁰ = w̄⁰ = w⁰ = x⁰.
  st_.v = st_.x;
  st_.w = st_.x;
  st_.w_bar = st_.x;
}

void SavrepSolver::ensure_caches() {
  if (st_.caches_ready) return;
  st_.h_cache = refresh_snapshot(p_->h, p_->noise_h, st_.w, h_noise_, ctr_.h_calls);
  st_.g_cache = refresh_snapshot(p_->g, p_->noise_g, st_.w_bar, g_noise_, ctr_.g_calls);
  st_.caches_ready = true;
}

Vector SavrepSolver::estimate(const SnapshotCache& cache, const ComponentFamily& fam,
                              const NoiseModel& noise, CounterRng& idx_rng, CounterRng& noise_rng,
                              const Vector& at, const Vector& anchor, std::int64_t& counter) {
  Vector acc = Vector::Zero(at.size());
  for (int b = 0; b < batch_; ++b) {
    int i = sample_component(fam, idx_rng);
    acc += vr_estimate(cache, fam, noise, i, at, anchor, noise_rng, counter);
  }
  return acc / batch_;
}

void SavrepSolver::step() {
  ensure_caches();
  const double a = prm_.alpha, b = prm_.beta, g = prm_.gamma;
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
    throw DivergenceError("savrep: non-finite iterate at iteration " + std::to_string(st_.iter),
                          st_.x, st_.iter);
  st_.x = std::move(x_next);
  st_.v = std::move(v_next);

  // Coins are drawn every iteration so stream positions are iterate-independent.
  bool take_w = h_coin_.coin(prm_.p1);
  bool take_wbar = g_coin_.coin(prm_.p2);
  if (take_w) {
    st_.w = st_.x;
    st_.h_cache = refresh_snapshot(p_->h, p_->noise_h, st_.w, h_noise_, ctr_.h_calls);
  }
  if (take_wbar) {
    st_.w_bar = st_.v;
    st_.g_cache = refresh_snapshot(p_->g, p_->noise_g, st_.w_bar, g_noise_, ctr_.g_calls);
    ++st_.epoch;
  }
  ++st_.iter;
}

RunResult SavrepSolver::run(const RunControl& rc, const TraceSink& sink) {
  RunResult out;
  MetricsEval metrics(*p_);
  const bool stop_on_dist = rc.tol > 0 && p_->x_star.has_value();
  const bool stop_on_res = rc.tol > 0 && !p_->x_star && p_->exact_available();
  std::int64_t li = rc.log_interval > 0
                        ? rc.log_interval
                        : std::max<std::int64_t>(1, p_->h.size() + p_->g.size());
  auto t0 = std::chrono::steady_clock::now();
  auto emit = [&](void) {
    TraceRecord t;
    t.iter = st_.iter;
    t.epoch = st_.epoch;
    t.oracle_h_calls = ctr_.h_calls;
    t.oracle_g_calls = ctr_.g_calls;
    metrics.fill(t, st_.x);
    t.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
    out.traces.push_back(t);
    if (sink) sink(t);
  };
  emit();
  while (ctr_.total() < rc.budget) {
    step();
    bool logged = false;
    if (stop_on_dist && metrics.dist_sq(st_.x) <= rc.tol) {
      out.converged = true;
      emit();
      logged = true;
    } else if (st_.iter % li == 0) {
      emit();
      logged = true;
      if (stop_on_res && out.traces.back().res_norm <= rc.tol) out.converged = true;
    }
    if (out.converged) break;
    (void)logged;
  }
  if (out.traces.back().iter != st_.iter) emit();
  out.final_point = st_.x;
  out.counters = ctr_;
  return out;
}

double savrep_potential(const SavrepState& st, const SavrepParams& prm, const GapEvaluator& gap) {
  double q_v = gap(st.v);
  double q_wbar = gap(st.w_bar);
  double dx = (st.x - gap.x_star()).squaredNorm();
  double dw = (st.w - gap.x_star()).squaredNorm();
  return (1.0 - prm.phi * prm.p2) * q_v + prm.phi * q_wbar +
         (prm.alpha / (2.0 * prm.gamma)) * ((1.0 - prm.p1) * dx + dw);
}

}  // namespace vrvi
