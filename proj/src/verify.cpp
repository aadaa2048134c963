// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#include "vrvi/verify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "vrvi/baselines.hpp"
#include "vrvi/constrained.hpp"
#include "vrvi/problems.hpp"
#include "vrvi/savrep.hpp"
#include "vrvi/savrep_m.hpp"
#include "vrvi/zeroth_order.hpp"

namespace vrvi {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void check(std::vector<VerifyCheck>& out, const std::string& name, bool pass,
           const std::string& detail) {
  out.push_back({name, pass, detail});
}

void bound_check(std::vector<VerifyCheck>& out, const std::string& name, double measured,
                 double limit) {
  check(out, name, measured <= limit, fmt(measured) + " <= " + fmt(limit));
}

std::vector<VerifyCheck> suite_projections() {
  std::vector<VerifyCheck> out;
  CounterRng rng(7, stream::kInit);
  auto ball = ConstraintSet::ball(Vector::Zero(5), 2.0);
  auto box = ConstraintSet::box(Vector::Constant(4, -1.0), Vector::Constant(4, 0.5));
  auto orth = ConstraintSet::nonneg_orthant(6);
  auto prod = ConstraintSet::product({ball, box, orth});

  double worst_idem = 0, worst_nonexp = 0, worst_contain = 1;
  for (int k = 0; k < 500; ++k) {
    double scale = (k % 3 == 0) ? 0.1 : (k % 3 == 1) ? 1.0 : 10.0;
    Vector p = scale * rng.gaussian(prod.dim());
    Vector q = scale * rng.gaussian(prod.dim());
    Vector pp = prod.project(p), pq = prod.project(q);
    worst_idem = std::max(worst_idem, (prod.project(pp) - pp).norm());
    double d = (p - q).norm();
    if (d > 1e-12) worst_nonexp = std::max(worst_nonexp, (pp - pq).norm() / d);
    worst_contain = std::min(worst_contain, prod.contains(pp, 1e-9) ? 1.0 : 0.0);
  }
  bound_check(out, "projection is idempotent", worst_idem, 1e-12);
  bound_check(out, "projection is non-expansive", worst_nonexp, 1.0 + 1e-12);
  check(out, "projected points are feasible", worst_contain == 1.0, "all samples");

  Vector far = Vector::Constant(5, 10.0);
  bound_check(out, "ball projection lands on the boundary",
              std::abs(ball.project(far).norm() - 2.0), 1e-12);
  Vector inside = Vector::Constant(5, 0.1);
  bound_check(out, "interior points are fixed", (ball.project(inside) - inside).norm(), 0.0);
  check(out, "diameters: ball 2r, box ||hi-lo||, product combines",
        std::abs(*ball.diameter() - 4.0) < 1e-12 &&
            std::abs(*box.diameter() - std::sqrt(4 * 1.5 * 1.5)) < 1e-12 &&
            !orth.diameter().has_value() && !prod.diameter().has_value(),
        "closed-form values");
  return out;
}

std::vector<VerifyCheck> suite_oracles() {
  std::vector<VerifyCheck> out;
  const int n = 6, m = 5;
  CounterRng rng(11, stream::kInit);
  ComponentFamily fam(n);
  std::vector<Matrix> mats;
  for (int i = 0; i < m; ++i) {
    Matrix a(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) a(r, c) = rng.normal();
    mats.push_back(a);
    Component comp;
    comp.exact = [a](const Vector& x) -> Vector { return a * x; };
    fam.add(std::move(comp), 0.5 + i);
  }
  NoiseModel quiet = NoiseModel::none();

  Vector anchor = rng.gaussian(n), x = rng.gaussian(n);
  std::int64_t calls = 0;
  CounterRng noise_rng(11, stream::kHNoise);
  SnapshotCache cache = refresh_snapshot(fam, quiet, anchor, noise_rng, calls);
  Vector expect = Vector::Zero(n);
  for (int i = 0; i < m; ++i)
    expect += fam.prob(i) * vr_estimate(cache, fam, quiet, i, x, anchor, noise_rng, calls);
  bound_check(out, "estimator is exactly unbiased (exhaustive over components)",
              (expect - fam.exact_sum(x)).norm(), 1e-12);

  const int draws = 20000;
  std::vector<int> freq(m, 0);
  CounterRng idx_rng(11, stream::kHIndex);
  for (int k = 0; k < draws; ++k) ++freq[sample_component(fam, idx_rng)];
  double worst_freq = 0;
  for (int i = 0; i < m; ++i) {
    double p = fam.prob(i);
    double sd = std::sqrt(p * (1 - p) / draws);
    worst_freq = std::max(worst_freq, std::abs(freq[i] / double(draws) - p) / sd);
  }
  bound_check(out, "index frequencies match Lipschitz weights (z-score)", worst_freq, 4.0);

  bool threw = false;
  try {
    Vector moved = anchor;
    moved[0] += 1.0;
    vr_estimate(cache, fam, quiet, 0, x, moved, noise_rng, calls);
  } catch (const std::logic_error&) {
    threw = true;
  }
  check(out, "stale snapshot anchor is rejected", threw, "logic_error raised");

  NoiseModel noisy = NoiseModel::make(0.3, 0.7, m, n, 42, stream::kHNoise);
  double worst_bias = 0;
  for (const auto& b : noisy.bias_vectors)
    worst_bias = std::max(worst_bias, std::abs(b.norm() - 0.3));
  bound_check(out, "bias vectors have norm exactly delta", worst_bias, 1e-12);
  double second = 0;
  const int reps = 20000;
  for (int k = 0; k < reps; ++k) {
    Vector v = eval_component_noisy(fam, noisy, 1, x, noise_rng, calls);
    second += (v - mats[1] * x - noisy.bias_vectors[1]).squaredNorm();
  }
  bound_check(out, "noise second moment equals sigma^2",
              std::abs(second / reps - 0.49), 1e-10);

  ComponentFamily one(1);
  Component c1;
  c1.exact = [](const Vector& v) { return v; };
  one.add(std::move(c1), 1.0);
  NoiseModel nh;
  nh.std = 1.0;
  TheoryConstants tc = compute_theory_constants(one, ComponentFamily(1), nh,
                                                NoiseModel::none(), 0.75);
  check(out, "aggregated noise constants match hand values",
        std::abs(tc.sigma_h_tilde_sq - 2.0) < 1e-12 && std::abs(tc.delta_cap - 4.0) < 1e-12,
        "sigma_tilde^2 = 2, delta = 4");
  return out;
}

std::vector<VerifyCheck> suite_monotonicity() {
  std::vector<VerifyCheck> out;
  SyntheticSpec spec;
  spec.dim = 8;
  spec.m1 = 3;
  spec.m2 = 2;
  spec.mu_h = 0.2;
  spec.L_h = 1.5;
  spec.L_g = 1.0;
  spec.seed = 3;
  InstanceData inst = gen_strongly_monotone(spec);
  CompositeVIProblem p = make_problem(inst);
  ParamReport cert = certify_instance(p, 400, 5);
  check(out, "strongly monotone generator certificate", cert.ok(),
        cert.ok() ? "all margins nonnegative" : cert.violations());
  double lh = 0;
  for (double l : p.h.lipschitz()) lh += l;
  bound_check(out, "generated total Lipschitz matches request", std::abs(lh - spec.L_h), 1e-9);
  bound_check(out, "residual vanishes at the closed-form solution",
              residual_norm(p, *p.x_star), 1e-8);
  check(out, "solution certificate over random feasible points",
        vi_certificate(p, *p.x_star, 400, 7) >= -1e-8, "inner products >= -1e-8");

  InstanceData bil = gen_bilinear_monotone(6, 5, 4, 9);
  CompositeVIProblem bp = make_problem(bil);
  ParamReport bcert = certify_instance(bp, 400, 6);
  check(out, "bilinear generator certificate", bcert.ok(),
        bcert.ok() ? "all margins nonnegative" : bcert.violations());
  bound_check(out, "bilinear residual at the origin", residual_norm(bp, *bil.x_star), 1e-14);

  InstanceData bg = attach_quadratic_g(gen_bilinear_monotone(6, 5, 4, 9), 3, 2.0, 13);
  CompositeVIProblem bgp = make_problem(bg);
  bound_check(out, "attached quadratics keep the zero solution",
              residual_norm(bgp, Vector::Zero(bgp.dim())), 1e-10);

  ConstrainedProgram prog;
  prog.primal_set = ConstraintSet::whole(1);
  prog.ell = 1;
  ObjectiveComponent oc;
  oc.value = [](const Vector& x) { return 0.5 * x[0] * x[0]; };
  oc.gradient = [](const Vector& x) -> Vector { return x; };
  oc.lipschitz = 1.0;
  prog.objective.push_back(std::move(oc));
  ConstraintBlock cb;
  cb.value = [](const Vector& x) -> Vector { return Vector::Constant(1, x[0] - 1.0); };
  cb.jacobian = [](const Vector&) -> Matrix { return Matrix::Ones(1, 1); };
  cb.lipschitz = std::sqrt(2.0);
  prog.constraints.push_back(std::move(cb));
  KktProblem kkt = build_kkt_problem(prog, 10.0, LipschitzMode::kClosedForm);
  CounterRng rng(21, stream::kInit);
  double worst = 0;
  for (int k = 0; k < 1000; ++k) {
    Vector z1 = kkt.vi.set.project(rng.gaussian(2) * 3.0);
    Vector z2 = kkt.vi.set.project(rng.gaussian(2) * 3.0);
    Vector diff = kkt.vi.exact_full(z1) - kkt.vi.exact_full(z2);
    worst = std::min(worst, diff.dot(z1 - z2));
  }
  check(out, "saddle operator is monotone on random pairs", worst >= -1e-8,
        "min inner product " + fmt(worst));
  return out;
}

std::vector<VerifyCheck> suite_zeroth_order() {
  std::vector<VerifyCheck> out;
  CounterRng rng(31, stream::kComponent);

  double worst_norm = 0;
  for (int k = 0; k < 200; ++k)
    worst_norm = std::max(worst_norm, std::abs(rng.sphere(7).norm() - 1.0));
  bound_check(out, "sphere samples are unit norm", worst_norm, 1e-12);

  int plus = 0;
  const int flips = 100000;
  for (int k = 0; k < flips; ++k)
    if (rng.sphere(1)[0] > 0) ++plus;
  bound_check(out, "one-dimensional directions are fair (z-score)",
              std::abs(plus - flips / 2.0) / std::sqrt(flips / 4.0), 4.0);

  NoisyScalarOracle quad;
  quad.value = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  Vector x0 = Vector::Zero(1);
  Vector u = Vector::Ones(1);
  Vector g = zo_gradient(quad, x0, 0.1, u, rng);
  bound_check(out, "two-point slope hand value (quadratic at origin)",
              std::abs(g[0] - 0.05), 1e-13);

  NoisyScalarOracle lin;
  lin.value = [](const Vector& x) { return 3.0 * x[0]; };
  Vector gp = zo_gradient(lin, x0, 0.1, u, rng);
  Vector gm = zo_gradient(lin, x0, 0.1, Vector(-u), rng);
  bound_check(out, "linear functions are recovered for both directions",
              std::abs(gp[0] - 3.0) + std::abs(gm[0] - 3.0), 1e-12);

  NoisyScalarOracle noisy_const;
  noisy_const.value = [](const Vector&) { return 4.2; };
  noisy_const.noise_std = 2.0;
  double worst_cancel = 0;
  for (int k = 0; k < 100; ++k) {
    Vector d = rng.sphere(4);
    worst_cancel = std::max(worst_cancel,
                            zo_gradient(noisy_const, Vector::Zero(4), 0.3, d, rng).norm());
  }
  check(out, "shared-realization noise cancels exactly on constants", worst_cancel == 0.0,
        "max norm " + fmt(worst_cancel));

  const int n = 3, trials = 20000;
  const double phi = 0.1;
  NoisyScalarOracle ball;
  ball.value = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  Vector at = Vector::Constant(n, 1.0);
  Vector mean = Vector::Zero(n);
  double second = 0;
  for (int k = 0; k < trials; ++k) {
    Vector d = rng.sphere(n);
    Vector est = zo_gradient(ball, at, phi, d, rng);
    mean += est;
    second += (est - at).squaredNorm();
  }
  mean /= trials;
  double bias_limit = smoothing_bias_bound(1.0, phi, n) + 4.0 * std::sqrt(double(n) / trials) *
                                                              std::sqrt(second / trials);
  bound_check(out, "Monte-Carlo bias within the smoothing bound", (mean - at).norm(),
              bias_limit);
  double var_limit = zo_variance_bound(at.norm() + phi, 0.0, 1.0, phi, n);
  bound_check(out, "Monte-Carlo second moment within the variance bound", second / trials,
              var_limit * 1.05);
  return out;
}

std::vector<VerifyCheck> suite_params() {
  std::vector<VerifyCheck> out;
  int tuples = 0, strong_ok = 0, factor_ok = 0, epoch_ok = 0;
  std::string first_violation;
  for (double mu : {1e-3, 1e-2, 1e-1, 1.0})
    for (double lh_mult : {1.0, 10.0, 100.0})
      for (double lg : {0.1, 1.0, 10.0})
        for (int m1 : {2, 8, 64})
          for (int m2 : {1, 16}) {
            double lh = mu * lh_mult;
            ++tuples;
            SavrepParams prm = savrep_default_params(mu, lh, lg, m1, m2);
            ParamReport rep = check_param_constraints(prm, lh, lg);
            if (rep.ok())
              ++strong_ok;
            else if (first_violation.empty())
              first_violation = rep.violations();
            double cf = savrep_contraction_factor(prm, mu, lh, lg, m1, m2);
            if (cf > 0 && cf < 1) ++factor_ok;
            SavrepMParams mp;
            mp.p1 = 1.0 / m1;
            mp.L_h = lh;
            mp.L_g = lg;
            mp.m1 = m1;
            mp.m2 = m2;
            mp.omega_z = 1.0;
            if (savrep_m_check_conditions(mp, 51).ok()) ++epoch_ok;
          }
  check(out, "closed-form parameters satisfy the step-size inequalities (grid)",
        strong_ok == tuples,
        fmt(strong_ok) + "/" + fmt(tuples) +
            (first_violation.empty() ? "" : "; first: " + first_violation));
  check(out, "contraction factor lies in (0,1) across the grid", factor_ok == tuples,
        fmt(factor_ok) + "/" + fmt(tuples));
  check(out, "epoch schedule satisfies its five conditions for s <= 50 (grid)",
        epoch_ok == tuples, fmt(epoch_ok) + "/" + fmt(tuples));

  SavrepParams bad;
  bad.gamma = 0.1;
  bad.alpha = 0.6;
  bad.beta = 0.6;
  bad.phi = 1;
  bad.p1 = 0.5;
  bad.p2 = 0.5;
  bad.mu_h = 1;
  ParamReport rep = check_param_constraints(bad, 1.0, 1.0);
  check(out, "injected averaging violation is flagged by name",
        !rep.ok() && rep.violations().find("1 - alpha - beta") != std::string::npos,
        rep.violations());

  SavrepMParams mbad;
  mbad.q = 0.5;
  mbad.p1 = 0.5;
  mbad.L_h = 1;
  mbad.L_g = 1;
  mbad.m1 = 2;
  mbad.m2 = 4;
  mbad.omega_z = 1;
  ParamReport mrep = savrep_m_check_conditions(mbad, 1);
  check(out, "injected trade-off violation is flagged by name",
        !mrep.ok() && mrep.violations().find("q - p1") != std::string::npos,
        mrep.violations());

  double g1 = savrep_m_capital_gamma(1), g2 = savrep_m_capital_gamma(2);
  check(out, "epoch damping product matches its closed form",
        std::abs(g1 - 0.5) < 1e-15 && std::abs(g2 - 0.3) < 1e-15,
        "1/2 and 3/10 at s = 1, 2");
  return out;
}

}  // namespace

std::vector<std::string> verify_suite_names() {
  return {"oracles", "projections", "monotonicity", "zeroth_order", "params"};
}

std::vector<VerifyCheck> run_verify_suite(const std::string& suite) {
  if (suite == "oracles") return suite_oracles();
  if (suite == "projections") return suite_projections();
  if (suite == "monotonicity") return suite_monotonicity();
  if (suite == "zeroth_order") return suite_zeroth_order();
  if (suite == "params") return suite_params();
  throw ConfigError("unknown verify suite '" + suite + "' (expected oracles, projections, "
                    "monotonicity, zeroth_order, or params)");
}

}  // namespace vrvi
