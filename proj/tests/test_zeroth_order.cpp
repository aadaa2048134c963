// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#include <cmath>

#include "doctest.h"
#include "vrvi/zeroth_order.hpp"

using namespace vrvi;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

NoisyScalarOracle quadratic_oracle(double noise_std = 0.0) {
  NoisyScalarOracle o;
  o.value = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  o.noise_std = noise_std;
  o.value_lipschitz = 2.0;
  o.gradient_lipschitz = 1.0;
  return o;
}

}  // namespace

TEST_CASE("two-point estimator: hand value on a quadratic at the origin") {
  // f = 0.5 x^2, x = 0, phi = 0.1, u = +1:
  //   (n/phi)(f(0.1) - f(0)) u = (1/0.1)(0.005) = 0.05.
  auto oracle = quadratic_oracle();
  CounterRng rng(1, stream::kComponent);
  Vector g = zo_gradient(oracle, vec({0.0}), 0.1, vec({1.0}), rng);
  CHECK(g[0] == doctest::Approx(0.05));
}

TEST_CASE("two-point estimator recovers a linear slope exactly, both directions") {
  NoisyScalarOracle o;
  o.value = [](const Vector& x) { return 3.0 * x[0]; };
  CounterRng rng(1, stream::kComponent);
  Vector gp = zo_gradient(o, vec({0.4}), 0.05, vec({1.0}), rng);
  Vector gm = zo_gradient(o, vec({0.4}), 0.05, vec({-1.0}), rng);
  CHECK(gp[0] == doctest::Approx(3.0));
  CHECK(gm[0] == doctest::Approx(3.0));  // (-slope) * (-u) restores the sign
}

TEST_CASE("shared noise realization cancels exactly on constant functions") {
  NoisyScalarOracle o;
  o.value = [](const Vector&) { return 7.0; };
  o.noise_std = 5.0;  // huge noise, same realization at both points
  CounterRng rng(9, stream::kComponent);
  for (int k = 0; k < 20; ++k) {
    Vector g = zo_gradient(o, vec({0.3, -0.2}), 0.1, vec({1.0, 0.0}), rng);
    CHECK(g.norm() == 0.0);  // exact zero, not merely small
  }
}

TEST_CASE("estimator rejects invalid directions and radii") {
  auto oracle = quadratic_oracle();
  CounterRng rng(1, stream::kComponent);
  CHECK_THROWS_AS(zo_gradient(oracle, vec({0.0}), 0.1, vec({2.0}), rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(zo_gradient(oracle, vec({0.0}), 0.0, vec({1.0}), rng), ConfigError);
  NoisyScalarOracle empty;
  CHECK_THROWS_AS(zo_gradient(empty, vec({0.0}), 0.1, vec({1.0}), rng), ConfigError);
}

TEST_CASE("bias and second-moment bounds: frozen values") {
  // 0.5 * phi * n * L = 0.5 * 0.1 * 10 * 2.
  CHECK(smoothing_bias_bound(2.0, 0.1, 10) == doctest::Approx(1.0));
  // 2n(M^2 + varsigma^2) + 0.5 phi^2 n^2 L^2 with n=1, M=1, varsigma=1, L=1, phi=0.1.
  CHECK(zo_variance_bound(1.0, 1.0, 1.0, 0.1, 1) == doctest::Approx(4.005));
}

TEST_CASE("estimator bias on a smooth function stays inside the bound") {
  // Monte Carlo mean vs true gradient for f = 0.5||x||^2; the smoothed
  // gradient of a quadratic equals the true one, so only sampling error
  // remains and the bound phi*n*L/2 holds with wide margin.
  auto oracle = quadratic_oracle();
  const int n = 3, N = 60000;
  const double phi = 0.2;
  Vector x = vec({1.0, -0.5, 0.25});
  CounterRng rng(13, stream::kComponent);
  Vector mean = Vector::Zero(n);
  for (int k = 0; k < N; ++k)
    mean += zo_gradient(oracle, x, phi, rng.sphere(n), rng);
  mean /= N;
  double bias = (mean - x).norm();
  CHECK(bias <= smoothing_bias_bound(oracle.gradient_lipschitz, phi, n));
  CHECK(bias <= 0.05);  // Monte Carlo error only
}

TEST_CASE("saddle bounds aggregate worst-case rows (hand values)") {
  ZeroOrderProgram prog;
  prog.primal_set = ConstraintSet::ball(Vector::Zero(2), 1.0);
  prog.ell = 2;
  ZeroOrderBlock blk;
  NoisyScalarOracle r1;
  r1.value = [](const Vector& x) { return x[0]; };
  r1.value_lipschitz = 1.0;
  r1.gradient_lipschitz = 3.0;
  NoisyScalarOracle r2;
  r2.value = [](const Vector& x) { return x[1]; };
  r2.value_lipschitz = 2.0;
  r2.noise_std = 0.5;
  r2.gradient_lipschitz = 4.0;
  blk.rows = {r1, r2};
  blk.lipschitz = 10.0;
  prog.constraints.push_back(blk);
  NoisyScalarOracle obj;
  obj.value = [](const Vector& x) { return x.squaredNorm(); };
  obj.value_lipschitz = 1.0;
  obj.gradient_lipschitz = 2.0;
  prog.objective.push_back(obj);

  SmoothingConfig cfg;
  cfg.phi = 0.1;
  cfg.dim = 2;
  ZoOracleBounds b = zo_kkt_bounds(prog, cfg, 2.0);
  // delta_h = 0.5 * phi * n * D_y * sqrt(3^2 + 4^2) = 0.5*0.1*2*2*5.
  CHECK(b.delta_h == doctest::Approx(1.0));
  // worst row variance: row2 -> 2*2*(4+0.25) + 0.5*0.01*4*16 = 17.32.
  // sigma_h^2 = ell (worst_var * D_y^2 + worst_noise^2) = 2*(17.32*4 + 0.25).
  CHECK(b.sigma_h_sq == doctest::Approx(2.0 * (17.32 * 4.0 + 0.25)));
  // delta_g = 0.5 * phi * n * L = 0.5*0.1*2*2.
  CHECK(b.delta_g == doctest::Approx(0.2));
  // sigma_g^2 = 2*2*(1+0) + 0.5*0.01*4*4.
  CHECK(b.sigma_g_sq == doctest::Approx(4.08));
  CHECK_THROWS_AS(zo_kkt_bounds(prog, SmoothingConfig{0.0, 2}, 2.0), ConfigError);
}

TEST_CASE("black-box saddle components have the advertised shapes and semantics") {
  // One constraint block (2 rows), one objective, primal dim 2: z lives in
  // R^{2+2} with the dual box capped at 3.
  ZeroOrderProgram prog;
  prog.primal_set = ConstraintSet::ball(Vector::Zero(2), 2.0);
  prog.ell = 2;
  ZeroOrderBlock blk;
  NoisyScalarOracle r1;
  r1.value = [](const Vector& x) { return x[0] - 0.5; };
  r1.gradient_lipschitz = 1.0;
  NoisyScalarOracle r2;
  r2.value = [](const Vector& x) { return x[1] + 0.25; };
  r2.gradient_lipschitz = 1.0;
  blk.rows = {r1, r2};
  blk.lipschitz = 4.0;
  prog.constraints.push_back(blk);
  NoisyScalarOracle obj;
  obj.value = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  obj.gradient_lipschitz = 1.0;
  prog.objective.push_back(obj);

  SmoothingConfig cfg;
  cfg.phi = 0.05;
  cfg.dim = 2;
  KktProblem k = zo_kkt_operator_components(prog, cfg, 3.0);
  CHECK(k.vi.dim() == 4);
  CHECK(k.primal_dim == 2);
  CHECK(k.ell == 2);
  CHECK(k.vi.h.size() == 1);
  CHECK(k.vi.g.size() == 1);
  // Sampling-only components: no exact path for the general family.
  CHECK_FALSE(k.vi.h.has_exact());
  CHECK_FALSE(k.vi.exact_available());

  // Noiseless rows: the dual part of a sample is exactly -h(x).
  CounterRng rng(5, stream::kComponent);
  Vector z = vec({0.25, -0.5, 1.0, 2.0});
  Vector s = k.vi.h.eval_sampled(0, z, rng);
  REQUIRE(s.size() == 4);
  CHECK(s[2] == doctest::Approx(-(0.25 - 0.5)));
  CHECK(s[3] == doctest::Approx(-(-0.5 + 0.25)));
  // The primal head is a multiple of one direction u (all rows share it):
  // with 2 primal coordinates the sample head must be parallel to some unit u.
  // Verified indirectly: the objective sample's head is +-(slope) u and its
  // dual part is identically zero.
  Vector gs = k.vi.g.eval_sampled(0, z, rng);
  CHECK(gs[2] == 0.0);
  CHECK(gs[3] == 0.0);
  // Objective values pass through for gap evaluation.
  CHECK(k.vi.g.has_values());
  CHECK(k.vi.g.value_sum(z) == doctest::Approx(0.5 * (0.25 * 0.25 + 0.25)));

  // The violation hook reads total constraint rows at the primal point.
  REQUIRE(static_cast<bool>(k.vi.cons_viol));
  CHECK(k.vi.cons_viol(vec({0.9, 0.0, 0.0, 0.0})) == doctest::Approx(0.4));

  // Guard rails.
  CHECK_THROWS_AS(zo_kkt_operator_components(prog, cfg, 0.0), ConfigError);
  SmoothingConfig bad = cfg;
  bad.dim = 3;
  CHECK_THROWS_AS(zo_kkt_operator_components(prog, bad, 3.0), ConfigError);
  ZeroOrderProgram stripped = prog;
  stripped.constraints[0].lipschitz = 0;
  CHECK_THROWS_AS(zo_kkt_operator_components(stripped, cfg, 3.0), ConfigError);
}

TEST_CASE("black-box estimates average to the finite-difference gradient") {
  // For the smooth objective f = 0.5||x||^2 the mean primal head of the
  // gradient component approaches the true gradient.
  ZeroOrderProgram prog;
  prog.primal_set = ConstraintSet::ball(Vector::Zero(2), 2.0);
  prog.ell = 1;
  ZeroOrderBlock blk;
  NoisyScalarOracle row;
  row.value = [](const Vector& x) { return x[0]; };
  row.gradient_lipschitz = 1.0;
  blk.rows = {row};
  blk.lipschitz = 3.0;
  prog.constraints.push_back(blk);
  NoisyScalarOracle obj;
  obj.value = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  obj.gradient_lipschitz = 1.0;
  prog.objective.push_back(obj);
  SmoothingConfig cfg;
  cfg.phi = 0.05;
  cfg.dim = 2;
  KktProblem k = zo_kkt_operator_components(prog, cfg, 3.0);
  CounterRng rng(21, stream::kComponent);
  Vector z = vec({0.8, -0.6, 0.5});
  Vector mean = Vector::Zero(3);
  const int N = 40000;
  for (int i = 0; i < N; ++i) mean += k.vi.g.eval_sampled(0, z, rng);
  mean /= N;
  CHECK(std::abs(mean[0] - 0.8) <= 0.03);
  CHECK(std::abs(mean[1] + 0.6) <= 0.03);
  CHECK(mean[2] == 0.0);
}
