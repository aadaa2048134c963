// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "vrvi/baselines.hpp"
#include "vrvi/problems.hpp"

using namespace vrvi;

namespace {

std::string temp_path(const char* name) {
  return std::string("vrvi_test_") + name;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

struct FileGuard {
  std::string path;
  ~FileGuard() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("strongly monotone generator: certified constants and usable reference") {
  SyntheticSpec spec;
  spec.dim = 12;
  spec.m1 = 4;
  spec.m2 = 3;
  spec.mu_h = 0.3;
  spec.L_h = 2.0;
  spec.L_g = 1.5;
  spec.seed = 21;
  InstanceData inst = gen_strongly_monotone(spec);
  REQUIRE(static_cast<int>(inst.A.size()) == 4);
  REQUIRE(static_cast<int>(inst.G.size()) == 3);
  CHECK(inst.mu_h == doctest::Approx(0.3));
  CompositeVIProblem p = make_problem(inst);
  CHECK(p.L_h() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(p.L_g() == doctest::Approx(1.5).epsilon(1e-6));
  REQUIRE(p.x_star.has_value());
  // On the whole space the reference is a true zero of the operator.
  CHECK(residual_norm(p, *p.x_star) <= 1e-8);
  CHECK((p.x0 - *p.x_star).norm() == doctest::Approx(1.0));  // unit-sphere offset
  ParamReport rep = certify_instance(p, 400, 5);
  CHECK(rep.ok());
}

TEST_CASE("strongly monotone generator: ball variant keeps a feasible reference") {
  SyntheticSpec spec;
  spec.dim = 8;
  spec.m1 = 3;
  spec.m2 = 2;
  spec.mu_h = 0.5;
  spec.L_h = 1.5;
  spec.L_g = 1.0;
  spec.set_variant = SetVariant::kBall;
  spec.seed = 9;
  CompositeVIProblem p = make_problem(gen_strongly_monotone(spec));
  REQUIRE(p.x_star.has_value());
  CHECK(p.set.kind() == ConstraintSet::Kind::kBall);
  CHECK(p.set.contains(*p.x_star, 1e-6));
  CHECK(p.set.contains(p.x0, 1e-9));
  CHECK(vi_certificate(p, *p.x_star) >= -1e-6);
}

TEST_CASE("strongly monotone generator: L_h equal to mu_h collapses to the scaled identity") {
  SyntheticSpec spec;
  spec.dim = 5;
  spec.m1 = 2;
  spec.m2 = 0;
  spec.mu_h = 0.7;
  spec.L_h = 0.7;
  InstanceData inst = gen_strongly_monotone(spec);
  CompositeVIProblem p = make_problem(inst);
  CHECK(p.L_h() == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(certify_instance(p, 200, 3).ok());
}

TEST_CASE("generator input validation") {
  SyntheticSpec spec;
  spec.m1 = 1;
  CHECK_THROWS_AS(gen_strongly_monotone(spec), ConfigError);
  spec.m1 = 2;
  spec.mu_h = 0.0;
  CHECK_THROWS_AS(gen_strongly_monotone(spec), ConfigError);
  spec.mu_h = 2.0;
  spec.L_h = 1.0;  // L_h < mu_h impossible
  CHECK_THROWS_AS(gen_strongly_monotone(spec), ConfigError);
}

TEST_CASE("bilinear generator: skew structure with the origin as solution") {
  InstanceData inst = gen_bilinear_monotone(4, 6, 3, 7);
  CompositeVIProblem p = make_problem(inst);
  CHECK(p.dim() == 10);
  CHECK(p.L_h() == doctest::Approx(1.0).epsilon(1e-9));
  REQUIRE(p.x_star.has_value());
  CHECK(p.x_star->norm() == 0.0);
  CHECK(residual_norm(p, *p.x_star) <= 1e-12);
  // Skewness: <F(z) - F(z'), z - z'> = 0 for all pairs.
  CounterRng rng(2, stream::kInit);
  for (int t = 0; t < 50; ++t) {
    Vector z1 = p.set.project(rng.gaussian(10));
    Vector z2 = p.set.project(rng.gaussian(10));
    double ip = (p.exact_full(z1) - p.exact_full(z2)).dot(z1 - z2);
    CHECK(std::abs(ip) <= 1e-10);
  }
  CHECK(certify_instance(p).ok());
}

TEST_CASE("quadratic attachments keep the zero solution and the requested rate") {
  InstanceData inst = attach_quadratic_g(gen_bilinear_monotone(5, 5, 2, 3), 4, 2.0, 11);
  REQUIRE(static_cast<int>(inst.G.size()) == 4);
  CompositeVIProblem p = make_problem(inst);
  CHECK(p.L_g() == doctest::Approx(2.0).epsilon(1e-9));
  // Sum of attached gradients vanishes at the origin (centered linear terms).
  Vector at0 = p.g.exact_sum(Vector::Zero(10));
  CHECK(at0.norm() <= 1e-12);
  REQUIRE(p.x_star.has_value());  // zero reference survives the attachment
  CHECK(residual_norm(p, *p.x_star) <= 1e-12);
  // Attaching to an instance with a nonzero reference drops the reference.
  SyntheticSpec spec;
  spec.dim = 5;
  spec.m1 = 2;
  spec.mu_h = 0.5;
  spec.L_h = 1.0;
  InstanceData sm = gen_strongly_monotone(spec);
  REQUIRE(sm.x_star.has_value());
  InstanceData smg = attach_quadratic_g(sm, 2, 1.0, 13);
  CHECK_FALSE(smg.x_star.has_value());
}

TEST_CASE("instance certificate flags a lying Lipschitz constant") {
  InstanceData inst = gen_bilinear_monotone(4, 4, 2, 5);
  CompositeVIProblem p = make_problem(inst);
  // Understate one component's constant: the certificate must notice.
  CompositeVIProblem lie;
  lie.set = p.set;
  lie.x0 = p.x0;
  lie.h = ComponentFamily(p.dim());
  for (int i = 0; i < p.h.size(); ++i) {
    Component c;
    const Matrix a = inst.A[i];
    const Vector b = inst.b[i];
    c.exact = [a, b](const Vector& x) -> Vector { return a * x + b; };
    lie.h.add(std::move(c), (i == 0 ? 0.01 : 1.0) * p.h.lipschitz()[i]);
  }
  lie.g = ComponentFamily(p.dim());
  CHECK_FALSE(certify_instance(lie).ok());
}

TEST_CASE("piecewise losses: frozen values, gradients and stability") {
  CHECK(smoothed_hinge(-1.0) == doctest::Approx(1.5));
  CHECK(smoothed_hinge(0.5) == doctest::Approx(0.125));
  CHECK(smoothed_hinge(2.0) == 0.0);
  CHECK(smoothed_hinge_grad(-1.0) == doctest::Approx(-1.0));
  CHECK(smoothed_hinge_grad(0.5) == doctest::Approx(-0.5));
  CHECK(smoothed_hinge_grad(2.0) == 0.0);
  CHECK(logistic_loss(0.0) == doctest::Approx(std::log(2.0)));
  CHECK(logistic_grad(0.0) == doctest::Approx(-0.5));
  // Large negative arguments must not overflow.
  CHECK(logistic_loss(-800.0) == doctest::Approx(800.0));
  CHECK(logistic_grad(-800.0) == doctest::Approx(-1.0));
  CHECK(logistic_loss(800.0) == doctest::Approx(0.0));
  // Gradients are consistent with finite differences on the smooth region.
  for (double t : {-2.0, -0.3, 0.2, 0.8, 1.4}) {
    double h = 1e-6;
    double fd = (smoothed_hinge(t + h) - smoothed_hinge(t - h)) / (2 * h);
    CHECK(smoothed_hinge_grad(t) == doctest::Approx(fd).epsilon(1e-4));
    fd = (logistic_loss(t + h) - logistic_loss(t - h)) / (2 * h);
    CHECK(logistic_grad(t) == doctest::Approx(fd).epsilon(1e-4));
  }
}

TEST_CASE("classification generator shapes and block partition") {
  NpSpec spec;
  spec.dim = 6;
  spec.n0 = 10;
  spec.n1 = 7;
  spec.m1 = 2;
  spec.m2 = 3;
  spec.seed = 3;
  NpInstance inst = gen_np_classification(spec);
  CHECK(inst.class0.rows() == 10);
  CHECK(inst.class1.rows() == 7);
  CHECK(inst.class0.cols() == 6);

  ConstrainedProgram prog = make_np_program(inst, 10.0);
  CHECK(static_cast<int>(prog.objective.size()) == 3);
  CHECK(static_cast<int>(prog.constraints.size()) == 2);
  CHECK(prog.ell == 1);
  CHECK(prog.primal_set.kind() == ConstraintSet::Kind::kBall);
  CHECK(prog.primal_set.radius() == doctest::Approx(spec.lambda));

  // Blocks partition the data: the summed objective equals the direct mean.
  CounterRng rng(4, stream::kInit);
  Vector x = 0.3 * rng.gaussian(6);
  double from_blocks = 0;
  for (const auto& oc : prog.objective) from_blocks += oc.value(x);
  double direct = 0;
  for (int j = 0; j < 10; ++j) direct += smoothed_hinge(inst.class0.row(j).dot(x));
  CHECK(from_blocks == doctest::Approx(direct / 10.0));

  double cons_from_blocks = 0;
  for (const auto& cb : prog.constraints) cons_from_blocks += cb.value(x)[0];
  double cons_direct = 0;
  for (int j = 0; j < 7; ++j) cons_direct += smoothed_hinge(-inst.class1.row(j).dot(x));
  CHECK(cons_from_blocks == doctest::Approx(cons_direct / 7.0 - spec.r1));

  // Jacobians match finite differences of the block values.
  const auto& cb = prog.constraints[0];
  Matrix J = cb.jacobian(x);
  for (int d = 0; d < 6; ++d) {
    Vector e = Vector::Zero(6);
    e[d] = 1e-6;
    double fd = (cb.value(x + e)[0] - cb.value(x - e)[0]) / 2e-6;
    CHECK(J(0, d) == doctest::Approx(fd).epsilon(1e-3));
  }
}

TEST_CASE("classification saddle problem carries certified block constants") {
  NpSpec spec;
  spec.dim = 5;
  spec.n0 = 12;
  spec.n1 = 12;
  spec.m1 = 2;
  spec.m2 = 2;
  spec.lambda = 2.0;
  spec.r1 = 0.2;
  spec.seed = 8;
  NpInstance inst = gen_np_classification(spec);
  const double cap = 4.0;
  KktProblem k = make_np_kkt(inst, cap);
  CHECK(k.vi.dim() == 6);
  CHECK(k.dual_cap == doctest::Approx(cap));
  // Randomized certificate over the capped domain validates every constant.
  CHECK(certify_instance(k.vi, 600, 17).ok());
  // The violation hook agrees with the program-level evaluation.
  ConstrainedProgram prog = make_np_program(inst, cap);
  CounterRng rng(5, stream::kInit);
  Vector z = k.vi.set.project(rng.gaussian(6));
  CHECK(k.vi.cons_viol(z) == doctest::Approx(constraint_violation(prog, z.head(5))));
}

TEST_CASE("sparse reader: hand lines, errors with line numbers, round trip") {
  std::string path = temp_path("rows.libsvm");
  FileGuard guard{path};
  write_text(path, "1 3:0.5 7:1.2\n-1 1:2\n1\n");
  SparseDataset ds = parse_libsvm(path);
  REQUIRE(static_cast<int>(ds.rows.size()) == 3);
  CHECK(ds.n_features == 7);
  CHECK(ds.rows[0].label == 1.0);
  REQUIRE(ds.rows[0].features.size() == 2);
  CHECK(ds.rows[0].features[0].first == 2);  // 1-based 3 -> 0-based 2
  CHECK(ds.rows[0].features[0].second == doctest::Approx(0.5));
  CHECK(ds.rows[0].features[1].first == 6);
  CHECK(ds.rows[1].label == -1.0);
  CHECK(ds.rows[2].features.empty());  // bare label line

  // Malformed token: the error names the line.
  write_text(path, "1 3:0.5\n-1 oops\n");
  try {
    parse_libsvm(path);
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }

  // Indices must be strictly ascending within a row.
  write_text(path, "1 3:0.5 2:1.0\n");
  CHECK_THROWS_AS(parse_libsvm(path), ConfigError);
  // Index zero is invalid (the format is 1-based).
  write_text(path, "1 0:0.5\n");
  CHECK_THROWS_AS(parse_libsvm(path), ConfigError);

  // Write-then-parse identity.
  write_text(path, "1 3:0.5 7:1.2\n-1 1:2\n1\n");
  SparseDataset first = parse_libsvm(path);
  std::string path2 = temp_path("rows2.libsvm");
  FileGuard guard2{path2};
  write_libsvm(path2, first);
  SparseDataset second = parse_libsvm(path2);
  REQUIRE(second.rows.size() == first.rows.size());
  for (size_t r = 0; r < first.rows.size(); ++r) {
    CHECK(second.rows[r].label == first.rows[r].label);
    REQUIRE(second.rows[r].features == first.rows[r].features);
  }
  CHECK(second.n_features == first.n_features);

  CHECK_THROWS_AS(parse_libsvm("does_not_exist.libsvm"), IoError);
}

TEST_CASE("dataset import splits classes and overrides the spec dimensions") {
  SparseDataset ds;
  ds.n_features = 3;
  SparseRow r;
  r.label = 1.0;
  r.features = {{0, 1.0}, {2, 2.0}};
  ds.rows.push_back(r);
  r.label = -1.0;
  r.features = {{1, 0.5}};
  ds.rows.push_back(r);
  r.label = 1.0;
  r.features = {};
  ds.rows.push_back(r);

  NpSpec spec;
  spec.dim = 99;  // overridden by the data
  spec.m1 = 1;
  spec.m2 = 1;
  NpInstance inst = np_from_dataset(ds, spec);
  CHECK(inst.spec.dim == 3);
  CHECK(inst.spec.n0 == 2);
  CHECK(inst.spec.n1 == 1);
  CHECK(inst.class0.rows() == 2);
  CHECK(inst.class1.rows() == 1);
  CHECK(inst.class0(0, 0) == doctest::Approx(1.0));
  CHECK(inst.class0(0, 2) == doctest::Approx(2.0));
  CHECK(inst.class0(1, 1) == doctest::Approx(0.0));  // densified empty row
  CHECK(inst.class1(0, 1) == doctest::Approx(0.5));
}
