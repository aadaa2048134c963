// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#ifndef VRVI_ZEROTH_ORDER_HPP_
#define VRVI_ZEROTH_ORDER_HPP_

#include <functional>
#include <vector>

#include "vrvi/constrained.hpp"
#include "vrvi/rng.hpp"

namespace vrvi {

struct SmoothingConfig {
  double phi = 0;  // smoothing radius; recommended ~ sqrt(target accuracy)/dim
  int dim = 0;     // primal dimension n
};

// Black-box scalar function with additive evaluation noise: an evaluation is
// value(x) + noise_std * eta where eta is supplied by the caller, so paired
// evaluations can share one realization. The constants bound the underlying
// function (value_lipschitz = M) and its gradient (gradient_lipschitz = L)
// and drive the bias/variance bounds below.
struct NoisyScalarOracle {
  std::function<double(const Vector&)> value;
  double noise_std = 0;
  double value_lipschitz = 0;     // M
  double gradient_lipschitz = 0;  // L

  double eval(const Vector& x, double eta) const { return value(x) + noise_std * eta; }
};

// Uniform direction on the unit sphere S^{n-1}.
inline Vector sphere_sample(CounterRng& rng, int n) { return rng.sphere(n); }

// Two-point directional estimator (n/phi)(f'(x+phi*u) - f'(x)) * u with the
// SAME noise realization at both points, so a constant function yields the
// zero vector exactly. u must be unit-norm.
Vector zo_gradient(const NoisyScalarOracle& oracle, const Vector& x, double phi, const Vector& u,
                   CounterRng& rng);

// Guaranteed bound on ||smoothed gradient - true gradient||: phi*n*L/2.
double smoothing_bias_bound(double gradient_lipschitz, double phi, int n);

// Second-moment bound on the estimator around the smoothed gradient:
// 2n(M² + varsigma²) + phi²n²L²/2.
double zo_variance_bound(double value_lipschitz, double varsigma, double gradient_lipschitz,
                         double phi, int n);

// A constrained program given only through noisy value oracles.
struct ZeroOrderBlock {
  std::vector<NoisyScalarOracle> rows;  // the ell scalar constraints of the block
  double lipschitz = 0;                 // saddle-map constant over the primal-dual domain
};

struct ZeroOrderProgram {
  std::vector<NoisyScalarOracle> objective;
  std::vector<ZeroOrderBlock> constraints;
  ConstraintSet primal_set = ConstraintSet::whole(1);
  int ell = 0;
};

// Bias/variance constants of the estimator components over the capped dual
// domain (worst case across components):
//   delta_h = (phi n D_y / 2) max_j sqrt(Σ_s L_{j,s}²),  sigma_h² = ell (ς̃_h² D_y² + ϖ²),
//   delta_g = max_i phi n L_i / 2,                       sigma_g² = ς̃_g²,
// where ς̃² is zo_variance_bound of the worst row.
struct ZoOracleBounds {
  double delta_h = 0;
  double sigma_h_sq = 0;
  double delta_g = 0;
  double sigma_g_sq = 0;
};
ZoOracleBounds zo_kkt_bounds(const ZeroOrderProgram& program, const SmoothingConfig& cfg,
                             double dual_cap);

// Builds the primal-dual VI whose components evaluate through two-point
// estimators: general blocks map z=(x;y) to (Σ_s y_s c_s u; -h'_j(x)) with
// one fresh direction u per block per call and per-row shared-noise slopes
// c_s; gradient components map to (c u; 0). Components are sampling-only
// (no exact evaluations), so gap metrics need an externally supplied shadow.
KktProblem zo_kkt_operator_components(const ZeroOrderProgram& program, const SmoothingConfig& cfg,
                                      double dual_cap);

}  // namespace vrvi

#endif  // VRVI_ZEROTH_ORDER_HPP_
