/* vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
 * Copyright 2026 vrvi contributors
 * Licensed under Apache 2.0
 *
 * C API for the vrvi shared library. All functions return a status code
 * (VRVI_OK on success); objects are passed around as opaque handles that
 * must be released with the matching _free function. On failure the
 * thread-local message from vrvi_last_error() describes what went wrong.
 */

#ifndef VRVI_H_
#define VRVI_H_

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* --- status codes ------------------------------------------------------ */

#define VRVI_OK 0
#define VRVI_ERR_CONFIG 2   /* invalid configuration or arguments */
#define VRVI_ERR_DIVERGED 3 /* solver produced a non-finite iterate */
#define VRVI_ERR_VERIFY 4   /* a verify suite reported failures */
#define VRVI_ERR_INVALID 5  /* null handle or out-of-range access */
#define VRVI_ERR_IO 6       /* file could not be read or written */

/* Human-readable message for the most recent failure on this thread. */
const char* vrvi_last_error(void);

/* Library version string, e.g. "0.1.0". */
const char* vrvi_version(void);

/* --- problems ----------------------------------------------------------- */

typedef struct vrvi_problem vrvi_problem;

/* Loss codes for classification problems. */
#define VRVI_LOSS_SMOOTHED_HINGE 0
#define VRVI_LOSS_LOGISTIC 1

/* Feasible-set codes for the strongly monotone generator. */
#define VRVI_SET_WHOLE 0
#define VRVI_SET_BALL 1

/* Synthetic strongly monotone instance with m1 general components and m2
 * gradient components; a known solution is planted (VRVI_SET_WHOLE) or
 * computed to high accuracy (VRVI_SET_BALL). */
int vrvi_gen_strongly_monotone(int64_t dim, int64_t m1, int64_t m2, double mu_h, double L_h,
                               double L_g, int set_kind, uint64_t seed, vrvi_problem** out);

/* Monotone (not strongly monotone) bilinear saddle instance on a product of
 * unit balls; the solution is the origin. */
int vrvi_gen_bilinear(int64_t n_x, int64_t n_y, int64_t m1, uint64_t seed, vrvi_problem** out);

/* Adds m2 convex quadratic gradient components (summing to total smoothness
 * L_g) to an existing instance. Clears any stored solution. */
int vrvi_attach_quadratic_g(vrvi_problem* p, int64_t m2, double L_g, uint64_t seed);

/* Synthetic two-class dataset + constrained classification program, exposed
 * as the primal-dual optimality-system operator with dual variables capped
 * at dual_cap. loss is one of the VRVI_LOSS_* codes. */
int vrvi_gen_np(int64_t dim, int64_t n0, int64_t n1, int loss, double lambda, double r1,
                int64_t m1, int64_t m2, uint64_t seed, double dual_cap, vrvi_problem** out);

/* Same program built from a LIBSVM-format dataset (labels >0 vs rest). */
int vrvi_np_from_libsvm(const char* path, int loss, double lambda, double r1, int64_t m1,
                        int64_t m2, double dual_cap, vrvi_problem** out);

/* Regularizes every general component with +mu * z, attaching the stored
 * solution metadata to nothing (the solution moves). Returns a new handle;
 * the input handle is untouched. attach_index selects which component
 * carries the shift when it cannot be split evenly; pass 0. */
int vrvi_perturb(const vrvi_problem* p, double mu, int64_t attach_index, vrvi_problem** out);

/* Installs additive oracle noise: each component family gets fixed bias
 * vectors of norm delta and isotropic noise of standard deviation sigma. */
int vrvi_set_noise(vrvi_problem* p, double delta_h, double sigma_h, double delta_g,
                   double sigma_g, uint64_t bias_seed);

/* Overrides the reference solution used for dist_sq / q_gap metrics. */
int vrvi_set_reference(vrvi_problem* p, const double* x, int64_t len);

/* Overrides the reference objective value used for the obj_gap metric. */
int vrvi_set_objective_reference(vrvi_problem* p, double f_star);

/* Sum of the gradient-family objective values at x (for computing reference
 * objective values). Fails when the instance has no value oracles. */
int vrvi_problem_objective(const vrvi_problem* p, const double* x, int64_t len, double* out);

/* Ambient dimension of the iterate, or -1 on a null handle. */
int64_t vrvi_problem_dim(const vrvi_problem* p);

/* Component counts of the two families; either pointer may be null. */
int vrvi_problem_sizes(const vrvi_problem* p, int64_t* m1, int64_t* m2);

/* Serializes a pristine generated/loaded instance to a binary file. Handles
 * that were perturbed or had noise attached cannot be saved. */
int vrvi_problem_save(const vrvi_problem* p, const char* path);

/* Loads an instance written by vrvi_problem_save. dual_cap is required for
 * constrained classification instances and ignored otherwise. */
int vrvi_problem_load(const char* path, double dual_cap, vrvi_problem** out);

void vrvi_problem_free(vrvi_problem* p);

/* --- solving ------------------------------------------------------------ */

#define VRVI_SOLVER_SAVREP 0    /* strongly monotone single-loop method */
#define VRVI_SOLVER_SAVREP_M 1  /* monotone epoch-scheduled method */
#define VRVI_SOLVER_EXTRAGRADIENT 2 /* deterministic full-operator baseline */

typedef struct vrvi_solve_options {
  int solver;            /* VRVI_SOLVER_* */
  uint64_t seed;         /* stream seed for sampling and noise */
  int64_t budget;        /* max iterations (savrep family) / max steps (baseline) */
  double tol;            /* 0 = run the full budget */
  int64_t log_interval;  /* trace row spacing; 0 = one pass over components */
  int64_t batch;         /* samples averaged per estimator draw, >= 1 */
  double omega_z;        /* domain radius bound for the monotone method; 0 = from set */
  double q;              /* potential weight split for the monotone method, in (p1,1) */
  double step;           /* baseline step size; 0 = 1/(L_h+L_g) */
} vrvi_solve_options;

/* Fills *opts with defaults (savrep, seed 1, budget 1e6, tol 0, batch 1). */
int vrvi_solve_options_init(vrvi_solve_options* opts);

typedef struct vrvi_result vrvi_result;

/* Runs the selected solver. On VRVI_ERR_DIVERGED a result carrying the rows
 * traced so far is still returned (when out is non-null). */
int vrvi_solve(const vrvi_problem* p, const vrvi_solve_options* opts, vrvi_result** out);

/* Number of trace rows. */
int64_t vrvi_result_rows(const vrvi_result* r);

/* Copies row i into out[0..9]:
 *   iter, epoch, oracle_h_calls, oracle_g_calls,
 *   dist_sq, q_gap, res_norm, cons_viol, obj_gap, wall_ms.
 * Metrics that were not measurable are NaN. */
int vrvi_result_row(const vrvi_result* r, int64_t i, double* out10);

/* Final iterate; len must equal the problem dimension. */
int vrvi_result_final_point(const vrvi_result* r, double* buf, int64_t len);

/* 1 when the run hit its tolerance, 0 otherwise. */
int vrvi_result_converged(const vrvi_result* r);

void vrvi_result_free(vrvi_result* r);

/* --- verification ------------------------------------------------------- */

/* Invoked once per check: pass is 1/0, detail is a short measurement. */
typedef void (*vrvi_verify_callback)(const char* name, int pass, const char* detail, void* user);

/* Runs one of the self-check suites ("oracles", "projections",
 * "monotonicity", "zeroth_order", "params") or "all". Returns VRVI_OK when
 * every check passes, VRVI_ERR_VERIFY otherwise. */
int vrvi_verify(const char* suite, vrvi_verify_callback cb, void* user);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* VRVI_H_ */
