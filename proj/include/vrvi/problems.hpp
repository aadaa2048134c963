// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#ifndef VRVI_PROBLEMS_HPP_
#define VRVI_PROBLEMS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vrvi/constrained.hpp"
#include "vrvi/problem.hpp"
#include "vrvi/savrep.hpp"

namespace vrvi {

enum class SetVariant { kWhole, kBall };

// Request for a synthetic strongly monotone instance with certified constants.
struct SyntheticSpec {
  int dim = 10;
  int m1 = 2;      // general components H_i(x) = A_i x + b_i
  int m2 = 0;      // quadratic gradient components
  double mu_h = 0.1;
  double L_h = 1.0;  // target Σ ||A_i||₂ (must be ≥ mu_h)
  double L_g = 1.0;  // target Σ ||G_i||₂
  SetVariant set_variant = SetVariant::kWhole;
  std::uint64_t seed = 1;
};

// Serializable linear-quadratic instance:
//   H_i(x) = A[i] x + b[i],  g_i(x) = ½ xᵀG[i]x + c[i]ᵀx.
struct InstanceData {
  std::vector<Matrix> A;
  std::vector<Vector> b;
  std::vector<Matrix> G;
  std::vector<Vector> c;
  double mu_h = 0;
  ConstraintSet set = ConstraintSet::whole(1);
  Vector x0;
  std::optional<Vector> x_star;
};

// Wires an instance into solver form; per-component Lipschitz constants are
// the exact spectral norms.
CompositeVIProblem make_problem(const InstanceData& inst);

// Strongly monotone family: Σ A_i = μ_h I + c(S + P) with S skew and P PSD
// rank-deficient, so the symmetric part has smallest eigenvalue exactly μ_h;
// the scale c is bisected until Σ ||A_i||₂ = L_h. The reference solution is
// closed-form on the whole space and baseline-solved on the ball variant.
InstanceData gen_strongly_monotone(const SyntheticSpec& spec);

// Merely monotone skew instance H_i(x,y) = (B_i y; -B_iᵀ x) over a product
// of unit balls, Σ ||A_i||₂ = 1, solution (0;0).
InstanceData gen_bilinear_monotone(int n_x, int n_y, int m1, std::uint64_t seed);

// Adds m2 convex quadratic gradient components with Σ c_i = 0 (preserves a
// zero solution) and ||G_i||₂ = L_g / m2 each.
InstanceData attach_quadratic_g(InstanceData inst, int m2, double L_g, std::uint64_t seed);

// Randomized certificate that a problem's advertised constants hold on
// `pairs` random feasible pairs: strong monotonicity of the general family,
// monotonicity of the gradient family, per-component Lipschitz rates.
ParamReport certify_instance(const CompositeVIProblem& p, int pairs = 1000,
                             std::uint64_t seed = 0);

// Piecewise-smooth losses for the classification builder.
double smoothed_hinge(double t);
double smoothed_hinge_grad(double t);
double logistic_loss(double t);
double logistic_grad(double t);

enum class NpLoss { kSmoothedHinge, kLogistic };

// min (1/n0) Σ φ(xᵀξ₀ⱼ)  s.t.  (1/n1) Σ φ(-xᵀξ₁ⱼ) ≤ r1,  ||x|| ≤ lambda;
// data points grouped evenly into m2 objective / m1 constraint blocks.
struct NpSpec {
  int dim = 50;
  int n0 = 200;
  int n1 = 200;
  NpLoss loss = NpLoss::kSmoothedHinge;
  double lambda = 5.0;
  double r1 = 0.1;
  int m1 = 1;
  int m2 = 10;
  std::uint64_t seed = 1;
};

// Serializable dataset-plus-spec bundle (one data point per matrix row).
struct NpInstance {
  Matrix class0;
  Matrix class1;
  NpSpec spec;
};

// Synthetic two-Gaussian data with separated means.
NpInstance gen_np_classification(const NpSpec& spec);

// The finite-sum program, with closed-form per-block Lipschitz constants
// valid on the dual box [0, dual_cap] (pass the same cap to the KKT builder).
ConstrainedProgram make_np_program(const NpInstance& inst, double dual_cap);

// Convenience: program + KKT build with consistent constants.
KktProblem make_np_kkt(const NpInstance& inst, double dual_cap);

// LIBSVM-format sparse rows: "label idx:val idx:val ..." with 1-based,
// strictly ascending indices. Internal indices are 0-based.
struct SparseRow {
  double label = 0;
  std::vector<std::pair<int, double>> features;
};

struct SparseDataset {
  std::vector<SparseRow> rows;
  int n_features = 0;
};

SparseDataset parse_libsvm(const std::string& path);
void write_libsvm(const std::string& path, const SparseDataset& ds);

// Splits a labeled dataset into the two classes (label > 0 = objective side)
// and densifies; overrides spec.dim / n0 / n1 from the data.
NpInstance np_from_dataset(const SparseDataset& ds, NpSpec spec);

}  // namespace vrvi

#endif  // VRVI_PROBLEMS_HPP_
