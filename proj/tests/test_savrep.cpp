// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#include <cmath>
#include <vector>

#include "doctest.h"
#include "vrvi/problems.hpp"
#include "vrvi/savrep.hpp"

using namespace vrvi;

namespace {

Vector vec1(double x) {
  Vector v(1);
  v[0] = x;
  return v;
}

// One-dimensional problem H(t) = t with a single component; no gradient part.
CompositeVIProblem scalar_problem(double x0) {
  CompositeVIProblem p;
  p.h = ComponentFamily(1);
  Component c;
  c.exact = [](const Vector& x) { return x; };
  p.h.add(std::move(c), 1.0);
  p.g = ComponentFamily(1);
  p.set = ConstraintSet::whole(1);
  p.mu_h = 1.0;
  p.x0 = vec1(x0);
  p.x_star = vec1(0.0);
  return p;
}

}  // namespace

TEST_CASE("closed-form parameters: frozen values for (mu,L_h,L_g,m1,m2)=(1,1,1,4,4)") {
  SavrepParams prm = savrep_default_params(1.0, 1.0, 1.0, 4, 4);
  CHECK(prm.p1 == doctest::Approx(0.25));
  CHECK(prm.p2 == doctest::Approx(0.25));
  // gamma = (1/4) min(sqrt(1/4)/1, sqrt((1/4)/1), (1/4)/1) = 1/16.
  CHECK(prm.gamma == doctest::Approx(0.0625));
  // alpha = (1/12) min(sqrt(1/(1/4)), 1) = 1/12.
  CHECK(prm.alpha == doctest::Approx(1.0 / 12.0));
  CHECK(prm.beta == doctest::Approx(0.5));
  // phi = (1 + alpha) m2 / 2 = (13/12)*2.
  CHECK(prm.phi == doctest::Approx(13.0 / 6.0));
  CHECK(prm.mu_h == doctest::Approx(1.0));
}

TEST_CASE("closed-form parameters reject degenerate requests") {
  CHECK_THROWS_AS(savrep_default_params(0.0, 1.0, 1.0, 4, 4), ConfigError);
  CHECK_THROWS_AS(savrep_default_params(1.0, 1.0, 1.0, 1, 4), ConfigError);
  CHECK_THROWS_AS(savrep_default_params(1.0, 1.0, 1.0, 4, 0), ConfigError);
  CHECK_THROWS_AS(savrep_default_params(1.0, 0.5, 1.0, 4, 4), ConfigError);  // L_h < mu_h
}

TEST_CASE("closed-form parameters handle a vanishing gradient family") {
  SavrepParams prm = savrep_default_params(1.0, 2.0, 0.0, 4, 1);
  // gamma = (1/4) min(sqrt(1/4)/2, inf, 1/4) = 1/16; alpha = 1/12 (cap at 1).
  CHECK(prm.gamma == doctest::Approx(0.0625));
  CHECK(prm.alpha == doctest::Approx(1.0 / 12.0));
  CHECK(check_param_constraints(prm, 2.0, 0.0).ok());
}

TEST_CASE("parameter report: frozen slack values and named violations") {
  SavrepParams prm = savrep_default_params(1.0, 1.0, 1.0, 4, 4);
  ParamReport rep = check_param_constraints(prm, 1.0, 1.0);
  CHECK(rep.ok());
  REQUIRE(rep.checks.size() == 8);
  // 1 - alpha - beta = 1 - 1/12 - 1/2 = 5/12.
  CHECK(rep.checks[5].slack == doctest::Approx(5.0 / 12.0));
  // p1 - 2 gamma^2 L_h^2 - gamma mu_h / 3 = 1/4 - 2/256 - 1/48.
  CHECK(rep.checks[6].slack == doctest::Approx(0.25 - 2.0 / 256.0 - 1.0 / 48.0));
  // 1 - p1 - 19 gamma mu / 12 - alpha gamma L_g (1 + 1/beta)
  //   = 3/4 - 19/192 - (1/12)(1/16)(3).
  CHECK(rep.checks[7].slack ==
        doctest::Approx(0.75 - 19.0 / 192.0 - 3.0 / (12.0 * 16.0)));

  SavrepParams bad = prm;
  bad.alpha = 0.6;
  bad.beta = 0.6;
  ParamReport vio = check_param_constraints(bad, 1.0, 1.0);
  CHECK_FALSE(vio.ok());
  CHECK(vio.violations().find("1 - alpha - beta") != std::string::npos);
}

TEST_CASE("contraction factor: frozen value and degenerate-family fallbacks") {
  SavrepParams prm = savrep_default_params(1.0, 1.0, 1.0, 4, 4);
  // max of {1-1/96, 1-1/96, 1-1/96, 1-1/192, 1-1/192} = 1 - 1/192.
  double c = savrep_contraction_factor(prm, 1.0, 1.0, 1.0, 4, 4);
  CHECK(c == doctest::Approx(1.0 - 1.0 / 192.0));
  // Without a gradient family its terms drop; the survivors are
  // {1-1/24, 1-1/96, 1-1/192} and the slowest one still wins.
  double c2 = savrep_contraction_factor(prm, 1.0, 1.0, 0.0, 4, 1);
  CHECK(c2 == doctest::Approx(1.0 - 1.0 / 192.0));
  CHECK(c < 1.0);
  CHECK(c2 < 1.0);
}

TEST_CASE("stochastic floor: frozen values from the aggregation constants") {
  SavrepParams prm = savrep_default_params(1.0, 1.0, 1.0, 4, 4);
  NoiseModel nh;
  nh.bias_norm = 0.3;
  nh.std = 0.4;
  TheoryConstants tc;
  tc.sigma_h_tilde_sq = 2.0;
  tc.sigma_g_tilde_sq = 0.0;
  auto [dh, dg] = savrep_noise_floor(prm, 4, 4, nh, NoiseModel::none(), tc);
  // (alpha/mu)(m1 sigma^2 + m1^2 delta^2) + 2 alpha gamma sigma_tilde^2
  //   = (1/12)(4*0.16 + 16*0.09) + 2*(1/12)*(1/16)*2.
  CHECK(dh == doctest::Approx((1.0 / 12.0) * 2.08 + 4.0 / 192.0));
  CHECK(dg == doctest::Approx(0.0));

  NoiseModel ng;
  ng.bias_norm = 0.1;
  ng.std = 0.2;
  tc.sigma_g_tilde_sq = 0.5;
  auto [dh2, dg2] = savrep_noise_floor(prm, 4, 4, NoiseModel::none(), ng, tc);
  // (16 alpha/mu)(m2 sigma^2 + m2^2 delta^2) + (16 alpha/mu) sigma_g_tilde^2
  //   = (16/12)(4*0.04 + 16*0.01) + (16/12)*0.5.
  CHECK(dg2 == doctest::Approx((16.0 / 12.0) * 0.32 + (16.0 / 12.0) * 0.5));
  CHECK(dh2 == doctest::Approx(2.0 * (1.0 / 12.0) * (1.0 / 16.0) * 2.0));
}

TEST_CASE("single step follows the extra-point update order (hand trace)") {
  // gamma=0.1, alpha=beta=0.5, p1=p2=1, x0=1, H(t)=t:
  //   x_bar = w = 1;  x_half = 1 - 0.1*1 = 0.9
  //   corrected estimate at x_half: 1 + (0.9 - 1) = 0.9
  //   x+ = 1 - 0.1*0.9 = 0.91;  v+ = 0.5*0.9 + 0.5*1 = 0.95
  //   both coins hit (p=1): w+ = x+ = 0.91, w_bar+ = v+ = 0.95.
  // These parameters violate the step-size inequalities on purpose: the
  // stepper must execute what it is given, validation lives elsewhere.
  CompositeVIProblem p = scalar_problem(1.0);
  SavrepParams prm;
  prm.gamma = 0.1;
  prm.alpha = 0.5;
  prm.beta = 0.5;
  prm.p1 = 1.0;
  prm.p2 = 1.0;
  prm.mu_h = 1.0;
  prm.phi = 1.0;
  SavrepSolver solver(p, prm, 1);
  solver.step();
  const SavrepState& st = solver.state();
  CHECK(st.x[0] == doctest::Approx(0.91));
  CHECK(st.v[0] == doctest::Approx(0.95));
  CHECK(st.w[0] == doctest::Approx(0.91));
  CHECK(st.w_bar[0] == doctest::Approx(0.95));
  CHECK(st.iter == 1);
  CHECK(st.epoch == 1);
  // init refresh (1) + one corrected estimate (1) + coin refresh (1).
  CHECK(solver.counters().h_calls == 3);
  CHECK(solver.counters().g_calls == 0);
  // The snapshot anchor tracks w exactly.
  CHECK(st.h_cache.anchor[0] == st.w[0]);
}

TEST_CASE("solver constructor validates parameters") {
  CompositeVIProblem p = scalar_problem(1.0);
  SavrepParams prm;
  prm.gamma = 0.1;
  prm.p1 = 1.0;
  prm.p2 = 1.0;
  CHECK_THROWS_AS(SavrepSolver(p, prm, 1, 0), ConfigError);  // batch < 1
  SavrepParams bad = prm;
  bad.gamma = 0.0;
  CHECK_THROWS_AS(SavrepSolver(p, bad, 1), ConfigError);
  bad = prm;
  bad.p1 = 1.5;
  CHECK_THROWS_AS(SavrepSolver(p, bad, 1), ConfigError);
}

TEST_CASE("same seed replays the trajectory bit for bit; another seed departs") {
  SyntheticSpec spec;
  spec.dim = 8;
  spec.m1 = 3;
  spec.m2 = 2;
  spec.mu_h = 0.5;
  spec.L_h = 2.0;
  spec.L_g = 1.0;
  spec.seed = 4;
  CompositeVIProblem p = make_problem(gen_strongly_monotone(spec));
  SavrepParams prm = savrep_default_params(0.5, 2.0, 1.0, 3, 2);
  SavrepSolver a(p, prm, 7), b(p, prm, 7), c(p, prm, 8);
  for (int k = 0; k < 60; ++k) {
    a.step();
    b.step();
    c.step();
  }
  CHECK((a.state().x - b.state().x).norm() == 0.0);
  CHECK((a.state().v - b.state().v).norm() == 0.0);
  CHECK((a.state().x - c.state().x).norm() > 0.0);
}

TEST_CASE("run: emits the start row, honors the log interval and the budget") {
  SyntheticSpec spec;
  spec.dim = 6;
  spec.m1 = 2;
  spec.m2 = 2;
  spec.mu_h = 0.5;
  spec.L_h = 1.0;
  spec.L_g = 0.5;
  CompositeVIProblem p = make_problem(gen_strongly_monotone(spec));
  SavrepParams prm = savrep_default_params(0.5, 1.0, 0.5, 2, 2);
  SavrepSolver solver(p, prm, 1);
  RunControl rc;
  rc.budget = 500;
  rc.log_interval = 10;
  rc.tol = 0;
  std::vector<TraceRecord> rows;
  RunResult res = solver.run(rc, [&](const TraceRecord& t) { rows.push_back(t); });
  REQUIRE(!rows.empty());
  CHECK(rows.front().iter == 0);
  CHECK(rows.front().oracle_h_calls == 0);  // caches are charged lazily, after the first row
  for (size_t i = 1; i + 1 < rows.size(); ++i) CHECK(rows[i].iter % 10 == 0);
  CHECK(res.counters.total() >= 500);
  CHECK(res.traces.back().iter == rows.back().iter);
  CHECK_FALSE(res.converged);
  // Metrics for a problem with a reference: dist_sq and q_gap are filled.
  CHECK(std::isfinite(rows.back().dist_sq));
  CHECK(std::isfinite(rows.back().res_norm));
}

TEST_CASE("run: distance stopping fires between log rows") {
  SyntheticSpec spec;
  spec.dim = 6;
  spec.m1 = 2;
  spec.m2 = 2;
  spec.mu_h = 1.0;
  spec.L_h = 2.0;
  spec.L_g = 0.5;
  CompositeVIProblem p = make_problem(gen_strongly_monotone(spec));
  SavrepParams prm = savrep_default_params(1.0, 2.0, 0.5, 2, 2);
  SavrepSolver solver(p, prm, 3);
  RunControl rc;
  rc.budget = 4'000'000;
  rc.log_interval = 1'000'000;  // would log almost never
  rc.tol = 1e-8;
  RunResult res = solver.run(rc, nullptr);
  CHECK(res.converged);
  CHECK(res.traces.back().dist_sq <= 1e-8);
  CHECK(res.counters.total() < 4'000'000);
}

TEST_CASE("run: budget zero still yields the starting row") {
  CompositeVIProblem p = scalar_problem(1.0);
  SavrepParams prm;
  prm.gamma = 0.1;
  prm.p1 = 1.0;
  prm.p2 = 1.0;
  prm.alpha = 0.25;
  prm.beta = 0.25;
  SavrepSolver solver(p, prm, 1);
  RunControl rc;
  rc.budget = 0;
  RunResult res = solver.run(rc, nullptr);
  CHECK(res.traces.size() == 1);
  CHECK(res.traces.front().iter == 0);
}

TEST_CASE("diverging iterates raise a divergence error with the last finite point") {
  CompositeVIProblem p = scalar_problem(1.0);
  SavrepParams prm;
  prm.gamma = 1e155;  // one huge step overflows the correction product
  prm.alpha = 0.5;
  prm.beta = 0.5;
  prm.p1 = 1.0;
  prm.p2 = 1.0;
  SavrepSolver solver(p, prm, 1);
  bool threw = false;
  try {
    for (int k = 0; k < 50; ++k) solver.step();
  } catch (const DivergenceError& e) {
    threw = true;
    CHECK(e.last_finite().allFinite());
    CHECK(e.iter() >= 0);
  }
  CHECK(threw);
}

TEST_CASE("potential combines gap and distance terms as specified") {
  CompositeVIProblem p = scalar_problem(2.0);
  SavrepParams prm;
  prm.gamma = 0.125;
  prm.alpha = 0.25;
  prm.beta = 0.5;
  prm.p1 = 0.5;
  prm.p2 = 0.5;
  prm.phi = 1.5;
  GapEvaluator gap = make_gap_evaluator(p);
  SavrepSolver solver(p, prm, 1);
  const SavrepState& st = solver.state();
  // All points start at x0=2, x*=0: Q(v)=Q(w_bar)=<H(0),2-0>+0=0 (no g part,
  // H(0)=0), so the potential is the pure distance term:
  // (alpha/2gamma) [(1-p1)*4 + 4] = 1 * 6 = 6.
  double pot = savrep_potential(st, prm, gap);
  CHECK(pot == doctest::Approx(6.0));
}

TEST_CASE("mean squared distance decays then floors under oracle noise") {
  // Smoke-scale version of the plateau property: with biased/noisy oracles the
  // iterates stop contracting at a positive floor instead of collapsing to 0.
  SyntheticSpec spec;
  spec.dim = 6;
  spec.m1 = 3;
  spec.m2 = 1;
  spec.mu_h = 1.0;
  spec.L_h = 2.0;
  spec.L_g = 0.2;
  CompositeVIProblem p = make_problem(gen_strongly_monotone(spec));
  p.noise_h = NoiseModel::make(0.05, 0.05, 3, 6, 11, stream::kHNoise);
  SavrepParams prm = savrep_default_params(1.0, 2.0, 0.2, 3, 1);
  double tail = 0;
  const int seeds = 8, iters = 1500;
  for (int s = 1; s <= seeds; ++s) {
    SavrepSolver solver(p, prm, static_cast<std::uint64_t>(s));
    for (int k = 0; k < iters; ++k) solver.step();
    tail += (solver.state().x - *p.x_star).squaredNorm();
  }
  tail /= seeds;
  double start = (p.x0 - *p.x_star).squaredNorm();
  CHECK(tail < 0.1 * start);  // contracted well below the start
  CHECK(tail > 1e-9);         // but floored above noiseless accuracy
}
