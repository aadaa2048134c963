// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#include <cmath>
#include <vector>

#include "doctest.h"
#include "vrvi/baselines.hpp"
#include "vrvi/problems.hpp"

using namespace vrvi;

namespace {

CompositeVIProblem strongly_monotone(int dim, int m1, int m2, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.dim = dim;
  spec.m1 = m1;
  spec.m2 = m2;
  spec.mu_h = 0.5;
  spec.L_h = 2.0;
  spec.L_g = 1.0;
  spec.seed = seed;
  return make_problem(gen_strongly_monotone(spec));
}

}  // namespace

TEST_CASE("extragradient reaches the reference solution of a monotone instance") {
  CompositeVIProblem p = strongly_monotone(10, 3, 2, 5);
  ExtragradientParams prm;
  prm.tol = 1e-11;
  BaselineResult res = solve_extragradient(p, prm);
  CHECK(res.converged);
  CHECK(res.residual <= 1e-11);
  CHECK((res.x - *p.x_star).norm() <= 1e-8);
}

TEST_CASE("extragradient handles a skew (merely monotone) instance") {
  CompositeVIProblem p = make_problem(gen_bilinear_monotone(6, 6, 3, 2));
  ExtragradientParams prm;
  prm.tol = 1e-9;
  prm.max_iters = 2'000'000;
  BaselineResult res = solve_extragradient(p, prm);
  CHECK(res.converged);
  CHECK(res.x.norm() <= 1e-6);  // solution is the origin
}

TEST_CASE("extragradient respects constraints via the natural residual") {
  // Strongly monotone instance restricted to a ball: the natural residual,
  // not ||F||, certifies the constrained solution.
  SyntheticSpec spec;
  spec.dim = 8;
  spec.m1 = 2;
  spec.m2 = 1;
  spec.mu_h = 0.5;
  spec.L_h = 1.5;
  spec.L_g = 0.5;
  spec.set_variant = SetVariant::kBall;
  CompositeVIProblem p = make_problem(gen_strongly_monotone(spec));
  ExtragradientParams prm;
  prm.tol = 1e-10;
  BaselineResult res = solve_extragradient(p, prm);
  CHECK(res.converged);
  CHECK(p.set.contains(res.x, 1e-9));
  CHECK(vi_certificate(p, res.x) >= -1e-7);
}

TEST_CASE("step sizes above the stability threshold are rejected") {
  CompositeVIProblem p = strongly_monotone(6, 2, 1, 3);
  ExtragradientParams prm;
  prm.step = 1.01 / (p.L_h() + p.L_g());
  CHECK_THROWS_AS(solve_extragradient(p, prm), ConfigError);
  prm.step = 0.9 / (p.L_h() + p.L_g());
  CHECK_NOTHROW(solve_extragradient(p, prm));
  prm.step = 0;
  prm.tol = -1.0;
  CHECK_THROWS_AS(solve_extragradient(p, prm), ConfigError);
  prm.tol = 1e-10;
  prm.max_iters = 0;
  CHECK_THROWS_AS(solve_extragradient(p, prm), ConfigError);
}

TEST_CASE("trace emission: start row, interval rows, charged oracle counts") {
  CompositeVIProblem p = strongly_monotone(6, 3, 2, 7);
  ExtragradientParams prm;
  prm.tol = 1e-30;  // unreachable: exercise the full loop
  prm.max_iters = 50;
  std::vector<TraceRecord> rows;
  solve_extragradient(p, prm, [&](const TraceRecord& t) { rows.push_back(t); }, 10);
  REQUIRE(rows.size() >= 2);
  CHECK(rows.front().iter == 0);
  CHECK(rows.front().oracle_h_calls == 0);
  CHECK(rows.back().iter == 50);
  // 2 full evaluations of each family per iteration.
  CHECK(rows.back().oracle_h_calls == 2 * 50 * 3);
  CHECK(rows.back().oracle_g_calls == 2 * 50 * 2);
  for (size_t i = 1; i + 1 < rows.size(); ++i) CHECK(rows[i].iter % 10 == 0);
  CHECK(std::isfinite(rows.back().res_norm));
  CHECK(std::isfinite(rows.back().dist_sq));
}

TEST_CASE("projected gradient solves optimization instances and rejects VI parts") {
  // Pure optimization: empty general family, quadratic gradient components.
  InstanceData inst = attach_quadratic_g(
      [] {
        InstanceData base;
        base.set = ConstraintSet::ball(Vector::Zero(6), 1.5);
        base.x0 = Vector::Constant(6, 0.5);
        base.mu_h = 0;
        return base;
      }(),
      3, 2.0, 17);
  inst.x_star.reset();
  CompositeVIProblem p = make_problem(inst);
  ExtragradientParams prm;
  prm.tol = 1e-10;
  BaselineResult res = solve_projected_gradient(p, prm);
  CHECK(res.converged);
  CHECK(res.residual <= 1e-10);
  // The general family is off-limits for the gradient method.
  CompositeVIProblem vi = strongly_monotone(4, 2, 1, 9);
  CHECK_THROWS_AS(solve_projected_gradient(vi, prm), ConfigError);
}

TEST_CASE("certificate separates solutions from non-solutions") {
  CompositeVIProblem p = strongly_monotone(8, 3, 2, 13);
  CHECK(vi_certificate(p, *p.x_star) >= -1e-8);
  Vector off = *p.x_star + Vector::Constant(8, 0.7);
  CHECK(vi_certificate(p, off) < -1e-3);
}
