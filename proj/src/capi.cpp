// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#include "vrvi.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vrvi/baselines.hpp"
#include "vrvi/constrained.hpp"
#include "vrvi/oracle.hpp"
#include "vrvi/problems.hpp"
#include "vrvi/savrep.hpp"
#include "vrvi/savrep_m.hpp"
#include "vrvi/serialize.hpp"
#include "vrvi/verify.hpp"

struct vrvi_problem {
  vrvi::CompositeVIProblem vi;
  std::optional<vrvi::InstanceData> linear;  // retained for serialization
  std::optional<vrvi::NpInstance> np;        // retained for serialization
  double dual_cap = 0;
  bool pristine = true;  // false once perturbed or given noise; such handles cannot be saved
};

struct vrvi_result {
  std::vector<vrvi::TraceRecord> traces;
  vrvi::Vector final_point;
  bool converged = false;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const vrvi::DivergenceError& e) {
    return fail(VRVI_ERR_DIVERGED, e.what());
  } catch (const vrvi::IoError& e) {
    return fail(VRVI_ERR_IO, e.what());
  } catch (const vrvi::ConfigError& e) {
    return fail(VRVI_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(VRVI_ERR_INVALID, e.what());
  }
}

int checked_int(std::int64_t v, const char* what) {
  if (v < 0 || v > std::numeric_limits<int>::max())
    throw vrvi::ConfigError(std::string(what) + " out of range");
  return static_cast<int>(v);
}

vrvi::NpLoss loss_from_code(int loss) {
  switch (loss) {
    case VRVI_LOSS_SMOOTHED_HINGE:
      return vrvi::NpLoss::kSmoothedHinge;
    case VRVI_LOSS_LOGISTIC:
      return vrvi::NpLoss::kLogistic;
    default:
      throw vrvi::ConfigError("unknown loss code " + std::to_string(loss));
  }
}

// Default parameter choice for the strongly monotone solver. Small general
// families (m1 < 2) fall outside the validated regime, so the probabilities
// degenerate to p1 = 1 and the step formulas are applied directly.
vrvi::SavrepParams resolve_savrep_params(const vrvi::CompositeVIProblem& vi) {
  if (!(vi.mu_h > 0))
    throw vrvi::ConfigError(
        "solve: the strongly monotone solver needs mu_h > 0; perturb the problem first");
  int m1 = static_cast<int>(vi.h.size());
  int m2 = static_cast<int>(std::max<std::size_t>(1, vi.g.size()));
  if (m1 >= 2) return vrvi::savrep_default_params(vi.mu_h, vi.L_h(), vi.L_g(), m1, m2);
  double mu = vi.mu_h;
  double L_h = vi.L_h();
  double L_g = vi.L_g();
  double inf = std::numeric_limits<double>::infinity();
  vrvi::SavrepParams prm;
  prm.mu_h = mu;
  prm.p1 = 1.0;
  prm.p2 = 1.0 / m2;
  prm.gamma = 0.25 * std::min({L_h > 0 ? 1.0 / L_h : inf,
                               L_g > 0 ? std::sqrt(prm.p2 / (L_g * mu)) : inf, 1.0 / mu});
  prm.alpha = std::min(L_g > 0 ? std::sqrt(mu / (L_g * prm.p2)) : inf, 1.0) / 12.0;
  prm.beta = 0.5;
  prm.phi = (1.0 + prm.alpha) * m2 / 2.0;
  return prm;
}

void run_solver(const vrvi_problem& p, const vrvi_solve_options& opts, vrvi_result& res) {
  vrvi::RunControl rc;
  rc.budget = opts.budget;
  rc.tol = opts.tol;
  rc.log_interval = opts.log_interval;
  auto sink = [&res](const vrvi::TraceRecord& t) { res.traces.push_back(t); };
  switch (opts.solver) {
    case VRVI_SOLVER_SAVREP: {
      vrvi::SavrepSolver solver(p.vi, resolve_savrep_params(p.vi), opts.seed,
                                checked_int(opts.batch, "batch"));
      vrvi::RunResult rr = solver.run(rc, sink);
      res.final_point = rr.final_point;
      res.converged = rr.converged;
      break;
    }
    case VRVI_SOLVER_SAVREP_M: {
      vrvi::SavrepMParams prm = vrvi::savrep_m_params_for(p.vi, opts.q);
      if (opts.omega_z > 0) prm.omega_z = opts.omega_z;
      vrvi::SavrepMSolver solver(p.vi, prm, opts.seed, checked_int(opts.batch, "batch"));
      vrvi::RunResult rr = solver.run(rc, sink);
      res.final_point = rr.final_point;
      res.converged = rr.converged;
      break;
    }
    case VRVI_SOLVER_EXTRAGRADIENT: {
      vrvi::ExtragradientParams prm;
      prm.step = opts.step;
      prm.tol = opts.tol > 0 ? opts.tol : 1e-300;  // effectively: run the full budget
      std::int64_t per_iter = 2 * static_cast<std::int64_t>(p.vi.h.size() + p.vi.g.size());
      prm.max_iters = per_iter > 0 ? opts.budget / per_iter : opts.budget;
      auto t0 = std::chrono::steady_clock::now();
      auto timed = [&](const vrvi::TraceRecord& t) {
        vrvi::TraceRecord copy = t;
        copy.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        sink(copy);
      };
      vrvi::BaselineResult br = vrvi::solve_extragradient(p.vi, prm, timed, opts.log_interval);
      res.final_point = br.x;
      res.converged = opts.tol > 0 && br.converged;
      break;
    }
    default:
      throw vrvi::ConfigError("unknown solver code " + std::to_string(opts.solver));
  }
}

}  // namespace

extern "C" {

const char* vrvi_last_error(void) { return g_last_error.c_str(); }

const char* vrvi_version(void) { return "0.1.0"; }

int vrvi_gen_strongly_monotone(int64_t dim, int64_t m1, int64_t m2, double mu_h, double L_h,
                               double L_g, int set_kind, uint64_t seed, vrvi_problem** out) {
  if (!out) return fail(VRVI_ERR_INVALID, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    vrvi::SyntheticSpec spec;
    spec.dim = checked_int(dim, "dim");
    spec.m1 = checked_int(m1, "m1");
    spec.m2 = checked_int(m2, "m2");
    spec.mu_h = mu_h;
    spec.L_h = L_h;
    spec.L_g = L_g;
    if (set_kind == VRVI_SET_WHOLE)
      spec.set_variant = vrvi::SetVariant::kWhole;
    else if (set_kind == VRVI_SET_BALL)
      spec.set_variant = vrvi::SetVariant::kBall;
    else
      throw vrvi::ConfigError("unknown set code " + std::to_string(set_kind));
    spec.seed = seed;
    auto h = std::make_unique<vrvi_problem>();
    h->linear = vrvi::gen_strongly_monotone(spec);
    h->vi = vrvi::make_problem(*h->linear);
    *out = h.release();
    return VRVI_OK;
  });
}

int vrvi_gen_bilinear(int64_t n_x, int64_t n_y, int64_t m1, uint64_t seed, vrvi_problem** out) {
  if (!out) return fail(VRVI_ERR_INVALID, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    auto h = std::make_unique<vrvi_problem>();
    h->linear = vrvi::gen_bilinear_monotone(checked_int(n_x, "n_x"), checked_int(n_y, "n_y"),
                                            checked_int(m1, "m1"), seed);
    h->vi = vrvi::make_problem(*h->linear);
    *out = h.release();
    return VRVI_OK;
  });
}

int vrvi_attach_quadratic_g(vrvi_problem* p, int64_t m2, double L_g, uint64_t seed) {
  if (!p) return fail(VRVI_ERR_INVALID, "null problem handle");
  return guarded([&] {
    if (!p->linear)
      throw vrvi::ConfigError("attach_quadratic_g: only linear-quadratic instances supported");
    p->linear = vrvi::attach_quadratic_g(std::move(*p->linear), checked_int(m2, "m2"), L_g, seed);
    p->vi = vrvi::make_problem(*p->linear);
    return VRVI_OK;
  });
}

int vrvi_gen_np(int64_t dim, int64_t n0, int64_t n1, int loss, double lambda, double r1,
                int64_t m1, int64_t m2, uint64_t seed, double dual_cap, vrvi_problem** out) {
  if (!out) return fail(VRVI_ERR_INVALID, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    vrvi::NpSpec spec;
    spec.dim = checked_int(dim, "dim");
    spec.n0 = checked_int(n0, "n0");
    spec.n1 = checked_int(n1, "n1");
    spec.loss = loss_from_code(loss);
    spec.lambda = lambda;
    spec.r1 = r1;
    spec.m1 = checked_int(m1, "m1");
    spec.m2 = checked_int(m2, "m2");
    spec.seed = seed;
    auto h = std::make_unique<vrvi_problem>();
    h->np = vrvi::gen_np_classification(spec);
    h->vi = vrvi::make_np_kkt(*h->np, dual_cap).vi;
    h->dual_cap = dual_cap;
    *out = h.release();
    return VRVI_OK;
  });
}

int vrvi_np_from_libsvm(const char* path, int loss, double lambda, double r1, int64_t m1,
                        int64_t m2, double dual_cap, vrvi_problem** out) {
  if (!out) return fail(VRVI_ERR_INVALID, "null output pointer");
  *out = nullptr;
  if (!path) return fail(VRVI_ERR_INVALID, "null path");
  return guarded([&] {
    vrvi::NpSpec spec;
    spec.loss = loss_from_code(loss);
    spec.lambda = lambda;
    spec.r1 = r1;
    spec.m1 = checked_int(m1, "m1");
    spec.m2 = checked_int(m2, "m2");
    auto h = std::make_unique<vrvi_problem>();
    h->np = vrvi::np_from_dataset(vrvi::parse_libsvm(path), spec);
    h->vi = vrvi::make_np_kkt(*h->np, dual_cap).vi;
    h->dual_cap = dual_cap;
    *out = h.release();
    return VRVI_OK;
  });
}

int vrvi_perturb(const vrvi_problem* p, double mu, int64_t attach_index, vrvi_problem** out) {
  if (!out) return fail(VRVI_ERR_INVALID, "null output pointer");
  *out = nullptr;
  if (!p) return fail(VRVI_ERR_INVALID, "null problem handle");
  return guarded([&] {
    auto h = std::make_unique<vrvi_problem>();
    h->vi = vrvi::perturb(p->vi, mu, checked_int(attach_index, "attach_index"));
    h->dual_cap = p->dual_cap;
    h->pristine = false;
    *out = h.release();
    return VRVI_OK;
  });
}

int vrvi_set_noise(vrvi_problem* p, double delta_h, double sigma_h, double delta_g,
                   double sigma_g, uint64_t bias_seed) {
  if (!p) return fail(VRVI_ERR_INVALID, "null problem handle");
  return guarded([&] {
    if (delta_h < 0 || sigma_h < 0 || delta_g < 0 || sigma_g < 0)
      throw vrvi::ConfigError("noise levels must be nonnegative");
    int dim = p->vi.dim();
    if (!p->vi.h.empty())
      p->vi.noise_h = vrvi::NoiseModel::make(delta_h, sigma_h, static_cast<int>(p->vi.h.size()),
                                             dim, bias_seed, vrvi::stream::kHNoise);
    else if (delta_h > 0 || sigma_h > 0)
      throw vrvi::ConfigError("noise requested for an empty general family");
    if (!p->vi.g.empty())
      p->vi.noise_g = vrvi::NoiseModel::make(delta_g, sigma_g, static_cast<int>(p->vi.g.size()),
                                             dim, bias_seed, vrvi::stream::kGNoise);
    else if (delta_g > 0 || sigma_g > 0)
      throw vrvi::ConfigError("noise requested for an empty gradient family");
    p->pristine = false;
    return VRVI_OK;
  });
}

int vrvi_set_reference(vrvi_problem* p, const double* x, int64_t len) {
  if (!p) return fail(VRVI_ERR_INVALID, "null problem handle");
  if (!x) return fail(VRVI_ERR_INVALID, "null reference pointer");
  return guarded([&] {
    if (len != p->vi.dim())
      throw vrvi::ConfigError("reference length does not match problem dimension");
    p->vi.x_star = Eigen::Map<const vrvi::Vector>(x, len);
    return VRVI_OK;
  });
}

int vrvi_set_objective_reference(vrvi_problem* p, double f_star) {
  if (!p) return fail(VRVI_ERR_INVALID, "null problem handle");
  return guarded([&] {
    if (!p->vi.g_values_available())
      throw vrvi::ConfigError("instance has no objective value oracles");
    p->vi.f_star = f_star;
    return VRVI_OK;
  });
}

int vrvi_problem_objective(const vrvi_problem* p, const double* x, int64_t len, double* out) {
  if (!p) return fail(VRVI_ERR_INVALID, "null problem handle");
  if (!x || !out) return fail(VRVI_ERR_INVALID, "null buffer");
  return guarded([&] {
    if (len != p->vi.dim())
      throw vrvi::ConfigError("point length does not match problem dimension");
    if (!p->vi.g_values_available())
      throw vrvi::ConfigError("instance has no objective value oracles");
    *out = p->vi.g_value(Eigen::Map<const vrvi::Vector>(x, len));
    return VRVI_OK;
  });
}

int64_t vrvi_problem_dim(const vrvi_problem* p) { return p ? p->vi.dim() : -1; }

int vrvi_problem_sizes(const vrvi_problem* p, int64_t* m1, int64_t* m2) {
  if (!p) return fail(VRVI_ERR_INVALID, "null problem handle");
  if (m1) *m1 = static_cast<int64_t>(p->vi.h.size());
  if (m2) *m2 = static_cast<int64_t>(p->vi.g.size());
  return VRVI_OK;
}

int vrvi_problem_save(const vrvi_problem* p, const char* path) {
  if (!p) return fail(VRVI_ERR_INVALID, "null problem handle");
  if (!path) return fail(VRVI_ERR_INVALID, "null path");
  return guarded([&] {
    if (!p->pristine)
      throw vrvi::ConfigError("save: handle was perturbed or given noise; save the original");
    if (p->linear)
      vrvi::save_instance(path, *p->linear);
    else if (p->np)
      vrvi::save_instance(path, *p->np);
    else
      throw vrvi::ConfigError("save: handle carries no serializable instance");
    return VRVI_OK;
  });
}

int vrvi_problem_load(const char* path, double dual_cap, vrvi_problem** out) {
  if (!out) return fail(VRVI_ERR_INVALID, "null output pointer");
  *out = nullptr;
  if (!path) return fail(VRVI_ERR_INVALID, "null path");
  return guarded([&] {
    vrvi::LoadedInstance loaded = vrvi::load_instance(path);
    auto h = std::make_unique<vrvi_problem>();
    if (loaded.kind == vrvi::InstanceKind::kLinearQuadratic) {
      h->linear = std::move(loaded.linear);
      h->vi = vrvi::make_problem(*h->linear);
    } else {
      if (!(dual_cap > 0))
        throw vrvi::ConfigError("load: constrained classification instances need dual_cap > 0");
      h->np = std::move(loaded.np);
      h->vi = vrvi::make_np_kkt(*h->np, dual_cap).vi;
      h->dual_cap = dual_cap;
    }
    *out = h.release();
    return VRVI_OK;
  });
}

void vrvi_problem_free(vrvi_problem* p) { delete p; }

int vrvi_solve_options_init(vrvi_solve_options* opts) {
  if (!opts) return fail(VRVI_ERR_INVALID, "null options pointer");
  opts->solver = VRVI_SOLVER_SAVREP;
  opts->seed = 1;
  opts->budget = 1'000'000;
  opts->tol = 0;
  opts->log_interval = 0;
  opts->batch = 1;
  opts->omega_z = 0;
  opts->q = 0.75;
  opts->step = 0;
  return VRVI_OK;
}

int vrvi_solve(const vrvi_problem* p, const vrvi_solve_options* opts, vrvi_result** out) {
  if (!out) return fail(VRVI_ERR_INVALID, "null output pointer");
  *out = nullptr;
  if (!p) return fail(VRVI_ERR_INVALID, "null problem handle");
  if (!opts) return fail(VRVI_ERR_INVALID, "null options pointer");
  auto res = std::make_unique<vrvi_result>();
  int code = guarded([&] {
    if (opts->budget < 0) throw vrvi::ConfigError("budget must be nonnegative");
    if (opts->tol < 0) throw vrvi::ConfigError("tol must be nonnegative");
    try {
      run_solver(*p, *opts, *res);
    } catch (const vrvi::DivergenceError& e) {
      res->final_point = e.last_finite();
      res->converged = false;
      throw;  // traces gathered so far stay on the result
    }
    return VRVI_OK;
  });
  if (code == VRVI_OK || code == VRVI_ERR_DIVERGED) *out = res.release();
  return code;
}

int64_t vrvi_result_rows(const vrvi_result* r) {
  return r ? static_cast<int64_t>(r->traces.size()) : -1;
}

int vrvi_result_row(const vrvi_result* r, int64_t i, double* out10) {
  if (!r) return fail(VRVI_ERR_INVALID, "null result handle");
  if (!out10) return fail(VRVI_ERR_INVALID, "null row buffer");
  if (i < 0 || i >= static_cast<int64_t>(r->traces.size()))
    return fail(VRVI_ERR_INVALID, "row index out of range");
  const vrvi::TraceRecord& t = r->traces[static_cast<std::size_t>(i)];
  out10[0] = static_cast<double>(t.iter);
  out10[1] = static_cast<double>(t.epoch);
  out10[2] = static_cast<double>(t.oracle_h_calls);
  out10[3] = static_cast<double>(t.oracle_g_calls);
  out10[4] = t.dist_sq;
  out10[5] = t.q_gap;
  out10[6] = t.res_norm;
  out10[7] = t.cons_viol;
  out10[8] = t.obj_gap;
  out10[9] = t.wall_ms;
  return VRVI_OK;
}

int vrvi_result_final_point(const vrvi_result* r, double* buf, int64_t len) {
  if (!r) return fail(VRVI_ERR_INVALID, "null result handle");
  if (!buf) return fail(VRVI_ERR_INVALID, "null point buffer");
  if (len != r->final_point.size())
    return fail(VRVI_ERR_INVALID, "point length does not match problem dimension");
  std::memcpy(buf, r->final_point.data(), sizeof(double) * static_cast<std::size_t>(len));
  return VRVI_OK;
}

int vrvi_result_converged(const vrvi_result* r) { return r && r->converged ? 1 : 0; }

void vrvi_result_free(vrvi_result* r) { delete r; }

int vrvi_verify(const char* suite, vrvi_verify_callback cb, void* user) {
  if (!suite) return fail(VRVI_ERR_INVALID, "null suite name");
  return guarded([&] {
    std::vector<std::string> suites;
    if (std::string(suite) == "all")
      suites = vrvi::verify_suite_names();
    else
      suites.push_back(suite);
    bool all_pass = true;
    for (const std::string& s : suites) {
      for (const vrvi::VerifyCheck& c : vrvi::run_verify_suite(s)) {
        all_pass = all_pass && c.pass;
        if (cb) cb(c.name.c_str(), c.pass ? 1 : 0, c.detail.c_str(), user);
      }
    }
    if (!all_pass) {
      g_last_error = "one or more verification checks failed";
      return VRVI_ERR_VERIFY;
    }
    return VRVI_OK;
  });
}

}  // extern "C"
