// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#include "vrvi/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace vrvi {

void ComponentFamily::add(Component c, double lipschitz) {
  if (!(lipschitz > 0)) throw ConfigError("ComponentFamily: Lipschitz constants must be positive");
  components_.push_back(std::move(c));
  lipschitz_.push_back(lipschitz);
  total_lipschitz_ += lipschitz;
  // Rebuild the sampling CDF; strictly increasing since every L_i > 0.
  cdf_.resize(lipschitz_.size());
  double acc = 0;
  for (std::size_t i = 0; i < lipschitz_.size(); ++i) {
    acc += lipschitz_[i];
    cdf_[i] = acc / total_lipschitz_;
  }
  cdf_.back() = 1.0;
}

Vector ComponentFamily::eval_exact(int i, const Vector& x) const {
  const Component& c = components_.at(i);
  if (!c.exact) throw std::logic_error("ComponentFamily: component has no exact evaluation");
  return c.exact(x);
}

Vector ComponentFamily::eval_sampled(int i, const Vector& x, CounterRng& rng) const {
  const Component& c = components_.at(i);
  if (c.sample) return c.sample(x, rng);
  if (!c.exact) throw std::logic_error("ComponentFamily: component has no evaluation");
  return c.exact(x);
}

Vector ComponentFamily::exact_sum(const Vector& x) const {
  Vector out = Vector::Zero(x.size());
  for (const auto& c : components_) {
    if (!c.exact) throw std::logic_error("ComponentFamily: exact_sum on black-box component");
    out += c.exact(x);
  }
  return out;
}

double ComponentFamily::value_sum(const Vector& x) const {
  double out = 0;
  for (const auto& c : components_) {
    if (!c.value) throw std::logic_error("ComponentFamily: component has no value function");
    out += c.value(x);
  }
  return out;
}

bool ComponentFamily::has_values() const {
  if (components_.empty()) return false;
  return std::all_of(components_.begin(), components_.end(),
                     [](const Component& c) { return static_cast<bool>(c.value); });
}

bool ComponentFamily::has_exact() const {
  return std::all_of(components_.begin(), components_.end(),
                     [](const Component& c) { return static_cast<bool>(c.exact); });
}

NoiseModel NoiseModel::none() { return NoiseModel{}; }

NoiseModel NoiseModel::make(double delta, double sigma, int m, int dim,
                            std::uint64_t bias_seed, std::uint64_t stream_id) {
  if (delta < 0 || sigma < 0) throw ConfigError("NoiseModel: delta and sigma must be nonnegative");
  NoiseModel n;
  n.bias_norm = delta;
  n.std = sigma;
  n.rng_stream_id = stream_id;
  if (delta > 0) {
    CounterRng rng(bias_seed, stream_id + 100);
    n.bias_vectors.reserve(m);
    for (int i = 0; i < m; ++i) n.bias_vectors.push_back(delta * rng.sphere(dim));
  }
  return n;
}

int sample_component(const ComponentFamily& family, CounterRng& rng) {
  if (family.empty()) throw std::logic_error("sample_component: empty family");
  double u = rng.uniform();
  const auto& cdf = family.cdf();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return static_cast<int>(it - cdf.begin());
}

Vector eval_component_noisy(const ComponentFamily& family, const NoiseModel& noise, int i,
                            const Vector& x, CounterRng& rng, std::int64_t& counter) {
  ++counter;
  Vector v = family.eval_sampled(i, x, rng);
  if (noise.silent()) return v;
  if (noise.bias_norm > 0) v += noise.bias_vectors.at(i);
  if (noise.std > 0) v += noise.std * rng.sphere(static_cast<int>(v.size()));
  return v;
}

SnapshotCache refresh_snapshot(const ComponentFamily& family, const NoiseModel& noise,
                               const Vector& anchor, CounterRng& rng, std::int64_t& counter) {
  SnapshotCache cache;
  cache.anchor = anchor;
  cache.full_sum = Vector::Zero(anchor.size());
  cache.per_component.reserve(family.size());
  for (int i = 0; i < family.size(); ++i) {
    cache.per_component.push_back(eval_component_noisy(family, noise, i, anchor, rng, counter));
    cache.full_sum += cache.per_component.back();
  }
  return cache;
}

Vector vr_estimate(const SnapshotCache& cache, const ComponentFamily& family,
                   const NoiseModel& noise, int i, const Vector& x, const Vector& anchor,
                   CounterRng& rng, std::int64_t& counter) {
  if (static_cast<int>(cache.per_component.size()) != family.size())
    throw std::invalid_argument("vr_estimate: cache size does not match family");
  if (cache.anchor.size() != anchor.size() || cache.anchor != anchor)
    throw std::logic_error("vr_estimate: stale snapshot cache (anchor mismatch)");
  Vector fresh = eval_component_noisy(family, noise, i, x, rng, counter);
  return cache.full_sum + (fresh - cache.per_component[i]) / family.prob(i);
}

TheoryConstants compute_theory_constants(const ComponentFamily& h_family,
                                         const ComponentFamily& g_family,
                                         const NoiseModel& noise_h, const NoiseModel& noise_g,
                                         double q) {
  if (!(q > 0 && q < 1)) throw ConfigError("compute_theory_constants: q must be in (0,1)");
  TheoryConstants tc;
  for (double l : h_family.lipschitz()) tc.inv_lipschitz_sum_h += 1.0 / l;
  for (double l : g_family.lipschitz()) tc.inv_lipschitz_sum_g += 1.0 / l;
  double sq_h = noise_h.std * noise_h.std + noise_h.bias_norm * noise_h.bias_norm;
  double sq_g = noise_g.std * noise_g.std + noise_g.bias_norm * noise_g.bias_norm;
  tc.sigma_h_tilde_sq = 2.0 * h_family.total_lipschitz() * sq_h * tc.inv_lipschitz_sum_h;
  tc.sigma_g_tilde_sq = 2.0 * g_family.total_lipschitz() * sq_g * tc.inv_lipschitz_sum_g;
  double m2 = static_cast<double>(g_family.size());
  tc.delta_cap = 2.0 * tc.sigma_h_tilde_sq +
                 (1.0 / (1.0 - q)) *
                     (2.0 * m2 * noise_g.std * noise_g.std + 4.0 * tc.sigma_g_tilde_sq);
  return tc;
}

}  // namespace vrvi
