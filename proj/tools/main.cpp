// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "vrvi.h"

namespace {

using vrvi_cli::CliError;
using vrvi_cli::Config;
using vrvi_cli::TraceRow;

struct ProblemDeleter {
  void operator()(vrvi_problem* p) const { vrvi_problem_free(p); }
};
using ProblemPtr = std::unique_ptr<vrvi_problem, ProblemDeleter>;

struct ResultDeleter {
  void operator()(vrvi_result* r) const { vrvi_result_free(r); }
};
using ResultPtr = std::unique_ptr<vrvi_result, ResultDeleter>;

[[noreturn]] void throw_status(int code) {
  int exit_code = code == VRVI_ERR_DIVERGED ? 3 : code == VRVI_ERR_VERIFY ? 4 : 2;
  throw CliError{exit_code, vrvi_last_error()};
}

void check(int code) {
  if (code != VRVI_OK) throw_status(code);
}

int loss_code(const std::string& name) {
  if (name == "smoothed_hinge") return VRVI_LOSS_SMOOTHED_HINGE;
  if (name == "logistic") return VRVI_LOSS_LOGISTIC;
  throw CliError{2, "unknown loss '" + name + "' (expected smoothed_hinge or logistic)"};
}

int set_code(const std::string& name) {
  if (name == "whole") return VRVI_SET_WHOLE;
  if (name == "ball") return VRVI_SET_BALL;
  throw CliError{2, "unknown set '" + name + "' (expected whole or ball)"};
}

int solver_code(const std::string& name) {
  if (name == "savrep") return VRVI_SOLVER_SAVREP;
  if (name == "savrep_m") return VRVI_SOLVER_SAVREP_M;
  if (name == "extragradient") return VRVI_SOLVER_EXTRAGRADIENT;
  throw CliError{2, "unknown solver '" + name + "' (expected savrep, savrep_m, or extragradient)"};
}

// Builds the problem described by the [problem] section.
ProblemPtr build_problem(const Config& cfg) {
  std::string kind = cfg.require_string("problem.kind");
  vrvi_problem* raw = nullptr;
  if (kind == "strongly_monotone") {
    check(vrvi_gen_strongly_monotone(
        cfg.get_int("problem.dim", 50), cfg.get_int("problem.m1", 2),
        cfg.get_int("problem.m2", 0), cfg.get_double("problem.mu_h", 0.1),
        cfg.get_double("problem.l_h", 1.0), cfg.get_double("problem.l_g", 1.0),
        set_code(cfg.get_string("problem.set", "whole")), cfg.get_uint("problem.seed", 1), &raw));
    return ProblemPtr(raw);
  }
  if (kind == "bilinear") {
    check(vrvi_gen_bilinear(cfg.get_int("problem.n_x", 10), cfg.get_int("problem.n_y", 10),
                            cfg.get_int("problem.m1", 2), cfg.get_uint("problem.seed", 1), &raw));
    ProblemPtr p(raw);
    std::int64_t m2 = cfg.get_int("problem.m2", 0);
    if (m2 > 0)
      check(vrvi_attach_quadratic_g(p.get(), m2, cfg.get_double("problem.l_g", 1.0),
                                    cfg.get_uint("problem.seed", 1)));
    return p;
  }
  if (kind == "np") {
    check(vrvi_gen_np(cfg.get_int("problem.dim", 50), cfg.get_int("problem.n0", 200),
                      cfg.get_int("problem.n1", 200),
                      loss_code(cfg.get_string("problem.loss", "smoothed_hinge")),
                      cfg.get_double("problem.lambda", 5.0), cfg.get_double("problem.r1", 0.1),
                      cfg.get_int("problem.m1", 1), cfg.get_int("problem.m2", 10),
                      cfg.get_uint("problem.seed", 1), cfg.get_double("problem.dual_cap", 10.0),
                      &raw));
    return ProblemPtr(raw);
  }
  if (kind == "np_libsvm") {
    check(vrvi_np_from_libsvm(cfg.require_string("problem.path").c_str(),
                              loss_code(cfg.get_string("problem.loss", "smoothed_hinge")),
                              cfg.get_double("problem.lambda", 5.0),
                              cfg.get_double("problem.r1", 0.1), cfg.get_int("problem.m1", 1),
                              cfg.get_int("problem.m2", 10),
                              cfg.get_double("problem.dual_cap", 10.0), &raw));
    return ProblemPtr(raw);
  }
  if (kind == "file") {
    check(vrvi_problem_load(cfg.require_string("problem.path").c_str(),
                            cfg.get_double("problem.dual_cap", 0.0), &raw));
    return ProblemPtr(raw);
  }
  throw CliError{2, "unknown problem.kind '" + kind +
                        "' (expected strongly_monotone, bilinear, np, np_libsvm, or file)"};
}

struct NoiseSpec {
  double delta_h = 0;
  double sigma_h = 0;
  double delta_g = 0;
  double sigma_g = 0;
  std::int64_t batch = 1;
  std::uint64_t bias_seed = 99;

  bool any() const { return delta_h > 0 || sigma_h > 0 || delta_g > 0 || sigma_g > 0; }
};

NoiseSpec read_noise(const Config& cfg) {
  NoiseSpec ns;
  ns.delta_h = cfg.get_double("noise.delta_h", 0);
  ns.sigma_h = cfg.get_double("noise.sigma_h", 0);
  ns.delta_g = cfg.get_double("noise.delta_g", 0);
  ns.sigma_g = cfg.get_double("noise.sigma_g", 0);
  ns.batch = cfg.get_int("noise.batch", 1);
  ns.bias_seed = cfg.get_uint("noise.bias_seed", 99);
  return ns;
}

// Config seeds, overridden by the VRVI_SEED environment variable when set.
std::vector<std::uint64_t> resolve_seeds(const Config& cfg, const std::string& key) {
  std::vector<std::uint64_t> seeds = cfg.get_uint_list(key, {1, 2, 3, 4, 5});
  const char* env = std::getenv("VRVI_SEED");
  if (env && *env) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') throw CliError{2, std::string("invalid VRVI_SEED '") + env + "'"};
    return {v};
  }
  return seeds;
}

std::vector<TraceRow> rows_of(const vrvi_result* res) {
  std::vector<TraceRow> rows(static_cast<std::size_t>(vrvi_result_rows(res)));
  for (std::size_t i = 0; i < rows.size(); ++i)
    check(vrvi_result_row(res, static_cast<int64_t>(i), rows[i].data()));
  return rows;
}

void write_csv(const std::string& path, const std::vector<TraceRow>& rows) {
  vrvi_cli::write_trace_csv(path, rows);
  std::printf("wrote %s\n", path.c_str());
}

void print_final(const char* label, const TraceRow& row) {
  std::printf("%s: iter=%lld oracle_calls=%lld", label, static_cast<long long>(row[0]),
              static_cast<long long>(row[2] + row[3]));
  const char* names[] = {"dist_sq", "q_gap", "res_norm", "cons_viol", "obj_gap"};
  for (int c = 4; c <= 8; ++c)
    if (!std::isnan(row[static_cast<std::size_t>(c)]))
      std::printf(" %s=%.6e", names[c - 4], row[static_cast<std::size_t>(c)]);
  std::printf("\n");
}

struct SolveOutcome {
  std::vector<std::vector<TraceRow>> per_seed;
  bool diverged = false;
  std::string error;
};

// Runs one solver over the seed list, writing one CSV per seed plus the mean
// CSV. Divergence flushes the partial trace and stops the seed loop.
SolveOutcome run_seeds(const vrvi_problem* p, vrvi_solve_options opts,
                       const std::vector<std::uint64_t>& seeds, const std::string& prefix) {
  SolveOutcome out;
  for (std::uint64_t seed : seeds) {
    opts.seed = seed;
    vrvi_result* raw = nullptr;
    int code = vrvi_solve(p, &opts, &raw);
    ResultPtr res(raw);
    if (code != VRVI_OK && code != VRVI_ERR_DIVERGED) throw_status(code);
    std::string path = prefix + "_seed" + std::to_string(seed) + ".csv";
    if (res) {
      out.per_seed.push_back(rows_of(res.get()));
      write_csv(path, out.per_seed.back());
    }
    if (code == VRVI_ERR_DIVERGED) {
      out.diverged = true;
      out.error = vrvi_last_error();
      return out;
    }
  }
  std::vector<TraceRow> mean = vrvi_cli::mean_by_iter(out.per_seed);
  write_csv(prefix + "_mean.csv", mean);
  print_final(prefix.c_str(), mean.back());
  return out;
}

vrvi_solve_options solver_options(const Config& cfg, const NoiseSpec& ns) {
  vrvi_solve_options opts;
  vrvi_solve_options_init(&opts);
  opts.solver = solver_code(cfg.get_string("solver.name", "savrep"));
  opts.budget = cfg.get_int("solver.budget", 200'000);
  opts.tol = cfg.get_double("solver.tol", 0);
  opts.log_interval = cfg.get_int("solver.log_interval", 0);
  opts.batch = ns.batch;
  opts.omega_z = cfg.get_double("solver.omega_z", 0);
  opts.q = cfg.get_double("solver.q", 0.75);
  opts.step = cfg.get_double("solver.step", 0);
  return opts;
}

int cmd_solve(const std::string& cfg_path) {
  Config cfg = Config::parse_file(cfg_path);
  ProblemPtr problem = build_problem(cfg);
  NoiseSpec ns = read_noise(cfg);
  vrvi_solve_options opts = solver_options(cfg, ns);
  double mu = cfg.get_double("solver.mu", 0);
  std::vector<std::uint64_t> seeds = resolve_seeds(cfg, "run.seeds");
  std::string prefix = cfg.get_string("run.output", "trace");
  cfg.finish();
  if (mu > 0) {
    vrvi_problem* perturbed = nullptr;
    check(vrvi_perturb(problem.get(), mu, 0, &perturbed));
    problem.reset(perturbed);
  }
  if (ns.any())
    check(vrvi_set_noise(problem.get(), ns.delta_h, ns.sigma_h, ns.delta_g, ns.sigma_g,
                         ns.bias_seed));
  SolveOutcome out = run_seeds(problem.get(), opts, seeds, prefix);
  if (out.diverged) {
    std::fprintf(stderr, "error: %s\n", out.error.c_str());
    return 3;
  }
  return 0;
}

int cmd_gen(const std::string& cfg_path, const std::string& out_path) {
  Config cfg = Config::parse_file(cfg_path);
  ProblemPtr problem = build_problem(cfg);
  cfg.finish();
  check(vrvi_problem_save(problem.get(), out_path.c_str()));
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

struct VerifyTally {
  int total = 0;
  int failed = 0;
};

int cmd_verify(const std::string& suite) {
  VerifyTally tally;
  auto cb = [](const char* name, int pass, const char* detail, void* user) {
    auto* t = static_cast<VerifyTally*>(user);
    ++t->total;
    if (!pass) ++t->failed;
    std::printf("[%s] %-58s %s\n", pass ? "PASS" : "FAIL", name, detail);
  };
  int code = vrvi_verify(suite.c_str(), cb, &tally);
  if (code == VRVI_OK || code == VRVI_ERR_VERIFY)
    std::printf("%d/%d checks passed\n", tally.total - tally.failed, tally.total);
  if (code == VRVI_OK) return 0;
  if (code == VRVI_ERR_VERIFY) return 4;
  std::fprintf(stderr, "error: %s\n", vrvi_last_error());
  return 2;
}

int cmd_bench_np(const std::string& cfg_path) {
  Config cfg = Config::parse_file(cfg_path);
  ProblemPtr base = build_problem(cfg);
  NoiseSpec ns = read_noise(cfg);
  double mu = cfg.get_double("bench.mu", 1e-5);
  double ref_mu = cfg.get_double("bench.ref_mu", 1e-6);
  std::int64_t ref_budget = cfg.get_int("bench.ref_budget", 2'000'000);
  double ref_tol = cfg.get_double("bench.ref_tol", 1e-10);
  std::int64_t budget = cfg.get_int("bench.budget", 200'000);
  std::int64_t log_interval = cfg.get_int("bench.log_interval", 0);
  double q = cfg.get_double("bench.q", 0.75);
  double omega_z = cfg.get_double("bench.omega_z", 0);
  std::vector<std::uint64_t> seeds = resolve_seeds(cfg, "bench.seeds");
  std::string prefix = cfg.get_string("bench.output", "np");
  cfg.finish();
  if (!(mu > 0)) throw CliError{2, "bench.mu must be positive"};

  // High-accuracy reference on a lightly regularized copy.
  vrvi_problem* raw = nullptr;
  check(vrvi_perturb(base.get(), ref_mu, 0, &raw));
  ProblemPtr ref_problem(raw);
  vrvi_solve_options ref_opts;
  vrvi_solve_options_init(&ref_opts);
  ref_opts.solver = VRVI_SOLVER_SAVREP;
  ref_opts.budget = ref_budget;
  ref_opts.tol = ref_tol;
  ref_opts.log_interval = 1000;  // residual stop is evaluated at log rows
  vrvi_result* ref_raw = nullptr;
  check(vrvi_solve(ref_problem.get(), &ref_opts, &ref_raw));
  ResultPtr ref_res(ref_raw);
  std::vector<double> z_ref(static_cast<std::size_t>(vrvi_problem_dim(base.get())));
  check(vrvi_result_final_point(ref_res.get(), z_ref.data(), static_cast<int64_t>(z_ref.size())));
  double f_ref = 0;
  check(vrvi_problem_objective(base.get(), z_ref.data(), static_cast<int64_t>(z_ref.size()),
                               &f_ref));
  std::printf("reference: %lld rows, objective %.12g\n",
              static_cast<long long>(vrvi_result_rows(ref_res.get())), f_ref);

  // Strongly monotone solver runs on the mu-perturbed operator.
  check(vrvi_perturb(base.get(), mu, 0, &raw));
  ProblemPtr perturbed(raw);
  check(vrvi_set_reference(perturbed.get(), z_ref.data(), static_cast<int64_t>(z_ref.size())));
  check(vrvi_set_objective_reference(perturbed.get(), f_ref));
  if (ns.any())
    check(vrvi_set_noise(perturbed.get(), ns.delta_h, ns.sigma_h, ns.delta_g, ns.sigma_g,
                         ns.bias_seed));
  // The monotone solver runs on the original operator.
  check(vrvi_set_reference(base.get(), z_ref.data(), static_cast<int64_t>(z_ref.size())));
  check(vrvi_set_objective_reference(base.get(), f_ref));
  if (ns.any())
    check(vrvi_set_noise(base.get(), ns.delta_h, ns.sigma_h, ns.delta_g, ns.sigma_g,
                         ns.bias_seed));

  vrvi_solve_options opts;
  vrvi_solve_options_init(&opts);
  opts.budget = budget;
  opts.log_interval = log_interval;
  opts.batch = ns.batch;
  opts.q = q;
  opts.omega_z = omega_z;

  opts.solver = VRVI_SOLVER_SAVREP;
  SolveOutcome a = run_seeds(perturbed.get(), opts, seeds, prefix + "_savrep");
  if (a.diverged) {
    std::fprintf(stderr, "error: %s\n", a.error.c_str());
    return 3;
  }
  opts.solver = VRVI_SOLVER_SAVREP_M;
  SolveOutcome b = run_seeds(base.get(), opts, seeds, prefix + "_savrep_m");
  if (b.diverged) {
    std::fprintf(stderr, "error: %s\n", b.error.c_str());
    return 3;
  }

  auto summary_row = [](const char* name, const std::vector<std::vector<TraceRow>>& per_seed) {
    TraceRow last = vrvi_cli::mean_by_iter(per_seed).back();
    auto cell = [](double v) {
      static thread_local char buf[32];
      if (std::isnan(v))
        std::snprintf(buf, sizeof buf, "%14s", "-");
      else
        std::snprintf(buf, sizeof buf, "%14.6e", v);
      return std::string(buf);
    };
    std::printf("%-10s %12lld %s %s %s %s\n", name, static_cast<long long>(last[2] + last[3]),
                cell(last[4]).c_str(), cell(last[6]).c_str(), cell(last[7]).c_str(),
                cell(last[8]).c_str());
  };
  std::printf("%-10s %12s %14s %14s %14s %14s\n", "solver", "calls", "dist_sq", "res_norm",
              "cons_viol", "obj_gap");
  summary_row("savrep", a.per_seed);
  summary_row("savrep_m", b.per_seed);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-sum variational inequality solver toolkit"};
  app.require_subcommand(1);
  std::string cfg_path;
  std::string out_path = "problem.bin";
  std::string suite;
  CLI::App* solve = app.add_subcommand("solve", "run a solver per config and write trace CSVs");
  solve->add_option("-c,--config", cfg_path, "config file")->required();
  CLI::App* verify = app.add_subcommand("verify", "run a self-check suite");
  verify
      ->add_option("suite", suite,
                   "one of: oracles, projections, monotonicity, zeroth_order, params, all")
      ->required();
  CLI::App* bench = app.add_subcommand("bench-np", "constrained-classification benchmark");
  bench->add_option("-c,--config", cfg_path, "config file")->required();
  CLI::App* gen = app.add_subcommand("gen", "generate an instance and save it to a binary file");
  gen->add_option("-c,--config", cfg_path, "config file")->required();
  gen->add_option("-o,--output", out_path, "output path (default problem.bin)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e);
    return r == 0 ? 0 : 2;
  }
  try {
    if (solve->parsed()) return cmd_solve(cfg_path);
    if (verify->parsed()) return cmd_verify(suite);
    if (bench->parsed()) return cmd_bench_np(cfg_path);
    if (gen->parsed()) return cmd_gen(cfg_path, out_path);
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.exit_code;
  }
  return 2;
}
