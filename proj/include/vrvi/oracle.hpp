// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#ifndef VRVI_ORACLE_HPP_
#define VRVI_ORACLE_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "vrvi/core.hpp"
#include "vrvi/rng.hpp"

namespace vrvi {

// One finite-sum component (an H_i mapping or a gradient ∇g_i).
// `exact` is the noiseless mapping used for metrics and shadow evaluations;
// `sample` is set only for inherently stochastic components (zeroth-order
// estimators) and defaults to `exact`. `value` carries the scalar g_i for
// gradient families so gap functions can be evaluated.
struct Component {
  std::function<Vector(const Vector&)> exact;
  std::function<Vector(const Vector&, CounterRng&)> sample;
  std::function<double(const Vector&)> value;
};

// Indexed component list with per-component Lipschitz constants and the
// Lipschitz-weighted sampling distribution q_i = L_i / L.
class ComponentFamily {
 public:
  ComponentFamily() = default;
  explicit ComponentFamily(int dim) : dim_(dim) {}

  void add(Component c, double lipschitz);

  int size() const { return static_cast<int>(components_.size()); }
  bool empty() const { return components_.empty(); }
  int dim() const { return dim_; }
  double total_lipschitz() const { return total_lipschitz_; }
  const std::vector<double>& lipschitz() const { return lipschitz_; }
  const std::vector<double>& cdf() const { return cdf_; }
  double prob(int i) const { return lipschitz_.at(i) / total_lipschitz_; }
  const Component& component(int i) const { return components_.at(i); }

  Vector eval_exact(int i, const Vector& x) const;
  // Stochastic components draw their internal randomness from `rng`.
  Vector eval_sampled(int i, const Vector& x, CounterRng& rng) const;
  // Noiseless full sum (zero vector for an empty family); metrics only.
  Vector exact_sum(const Vector& x) const;
  double value_sum(const Vector& x) const;
  bool has_values() const;
  bool has_exact() const;

 private:
  int dim_ = 0;
  std::vector<Component> components_;
  std::vector<double> lipschitz_;
  std::vector<double> cdf_;
  double total_lipschitz_ = 0;
};

// Additive oracle noise: a fixed per-component bias vector of norm exactly δ
// (drawn once from bias_seed) plus σ·u with u uniform on the unit sphere, so
// E…noise…² = σ² exactly. Per-evaluation draws come from the solver stream
// identified by rng_stream_id; bias vectors are part of the problem.
struct NoiseModel {
  double bias_norm = 0;  // δ
  double std = 0;        // σ
  std::vector<Vector> bias_vectors;
  std::uint64_t rng_stream_id = stream::kHNoise;

  static NoiseModel none();
  static NoiseModel make(double delta, double sigma, int m, int dim,
                         std::uint64_t bias_seed, std::uint64_t stream_id);
  bool silent() const { return bias_norm == 0 && std == 0; }
};

// Sample index i with probability L_i / L (inverse CDF on a 64-bit uniform).
int sample_component(const ComponentFamily& family, CounterRng& rng);

// components[i](x) + bias_i + σ·u. With δ=σ=0 this is the exact evaluation,
// bit for bit, and consumes no randomness beyond the component's own.
Vector eval_component_noisy(const ComponentFamily& family, const NoiseModel& noise, int i,
                            const Vector& x, CounterRng& rng, std::int64_t& counter);

// Snapshot of the full noisy sum at an anchor (w or w̄). per_component keeps
// the exact realizations so estimator corrections reuse them unchanged.
struct SnapshotCache {
  Vector anchor;
  Vector full_sum;
  std::vector<Vector> per_component;
};

// Evaluates every component at the anchor once; counter += family size.
SnapshotCache refresh_snapshot(const ComponentFamily& family, const NoiseModel& noise,
                               const Vector& anchor, CounterRng& rng, std::int64_t& counter);

// Variance-reduced estimate of the full sum at x:
//   cache.full_sum + (1/q_i)(component_i'(x) - cache.per_component[i]).
// `anchor` must equal the cache anchor exactly (stale caches are a logic
// error: the correction term would not telescope).
Vector vr_estimate(const SnapshotCache& cache, const ComponentFamily& family,
                   const NoiseModel& noise, int i, const Vector& x, const Vector& anchor,
                   CounterRng& rng, std::int64_t& counter);

// Aggregated noise constants entering the step-size schedules and the
// stochastic-error floors.
struct TheoryConstants {
  double sigma_h_tilde_sq = 0;   // 2 L_h (σ_h²+δ_h²) Σ 1/L_{h(i)}
  double sigma_g_tilde_sq = 0;
  double delta_cap = 0;          // 2σ̃_h² + (1/(1−q))(2 m₂ σ_g² + 4 σ̃_g²)
  double inv_lipschitz_sum_h = 0;
  double inv_lipschitz_sum_g = 0;
};

TheoryConstants compute_theory_constants(const ComponentFamily& h_family,
                                         const ComponentFamily& g_family,
                                         const NoiseModel& noise_h, const NoiseModel& noise_g,
                                         double q);

}  // namespace vrvi

#endif  // VRVI_ORACLE_HPP_
