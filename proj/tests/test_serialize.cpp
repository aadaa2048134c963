// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "vrvi/serialize.hpp"

using namespace vrvi;

namespace {

struct FileGuard {
  std::string path;
  ~FileGuard() { std::remove(path.c_str()); }
};

InstanceData sample_linear() {
  SyntheticSpec spec;
  spec.dim = 7;
  spec.m1 = 3;
  spec.m2 = 2;
  spec.mu_h = 0.4;
  spec.L_h = 1.3;
  spec.L_g = 0.9;
  spec.seed = 77;
  return gen_strongly_monotone(spec);
}

bool matrices_equal(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a - b).norm() == 0.0;
}

bool vectors_equal(const Vector& a, const Vector& b) {
  return a.size() == b.size() && (a - b).norm() == 0.0;
}

bool sets_equal(const ConstraintSet& a, const ConstraintSet& b) {
  if (a.kind() != b.kind() || a.dim() != b.dim()) return false;
  switch (a.kind()) {
    case ConstraintSet::Kind::kWhole:
    case ConstraintSet::Kind::kNonnegOrthant:
      return true;
    case ConstraintSet::Kind::kBall:
      return vectors_equal(a.center(), b.center()) && a.radius() == b.radius();
    case ConstraintSet::Kind::kBox:
      return vectors_equal(a.lo(), b.lo()) && vectors_equal(a.hi(), b.hi());
    case ConstraintSet::Kind::kProduct: {
      if (a.blocks().size() != b.blocks().size()) return false;
      for (size_t i = 0; i < a.blocks().size(); ++i)
        if (!sets_equal(a.blocks()[i], b.blocks()[i])) return false;
      return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("linear-quadratic instances survive a save/load round trip bit for bit") {
  InstanceData inst = sample_linear();
  std::string path = "vrvi_test_linear.bin";
  FileGuard guard{path};
  save_instance(path, inst);
  LoadedInstance loaded = load_instance(path);
  CHECK(loaded.kind == InstanceKind::kLinearQuadratic);
  REQUIRE(loaded.linear.has_value());
  CHECK_FALSE(loaded.np.has_value());
  const InstanceData& got = *loaded.linear;
  REQUIRE(got.A.size() == inst.A.size());
  REQUIRE(got.G.size() == inst.G.size());
  for (size_t i = 0; i < inst.A.size(); ++i) {
    CHECK(matrices_equal(got.A[i], inst.A[i]));
    CHECK(vectors_equal(got.b[i], inst.b[i]));
  }
  for (size_t i = 0; i < inst.G.size(); ++i) {
    CHECK(matrices_equal(got.G[i], inst.G[i]));
    CHECK(vectors_equal(got.c[i], inst.c[i]));
  }
  CHECK(got.mu_h == inst.mu_h);
  CHECK(vectors_equal(got.x0, inst.x0));
  REQUIRE(got.x_star.has_value());
  CHECK(vectors_equal(*got.x_star, *inst.x_star));
  CHECK(sets_equal(got.set, inst.set));
}

TEST_CASE("every feasible-set kind round-trips, including nested products") {
  InstanceData inst = sample_linear();
  std::string path = "vrvi_test_sets.bin";
  FileGuard guard{path};
  Vector lo = Vector::Constant(7, -1.0), hi = Vector::Constant(7, 2.0);
  std::vector<ConstraintSet> variants = {
      ConstraintSet::whole(7),
      ConstraintSet::ball(Vector::Ones(7), 2.5),
      ConstraintSet::nonneg_orthant(7),
      ConstraintSet::box(lo, hi),
      ConstraintSet::product(
          {ConstraintSet::ball(Vector::Zero(3), 1.0),
           ConstraintSet::product({ConstraintSet::box(lo.head(2), hi.head(2)),
                                   ConstraintSet::nonneg_orthant(2)})})};
  for (const auto& s : variants) {
    inst.set = s;
    save_instance(path, inst);
    LoadedInstance loaded = load_instance(path);
    REQUIRE(loaded.linear.has_value());
    CHECK(sets_equal(loaded.linear->set, s));
  }
}

TEST_CASE("an absent reference stays absent after the round trip") {
  InstanceData inst = sample_linear();
  inst.x_star.reset();
  std::string path = "vrvi_test_noref.bin";
  FileGuard guard{path};
  save_instance(path, inst);
  LoadedInstance loaded = load_instance(path);
  REQUIRE(loaded.linear.has_value());
  CHECK_FALSE(loaded.linear->x_star.has_value());
}

TEST_CASE("classification instances round-trip with their spec") {
  NpSpec spec;
  spec.dim = 4;
  spec.n0 = 6;
  spec.n1 = 5;
  spec.loss = NpLoss::kLogistic;
  spec.lambda = 2.5;
  spec.r1 = 0.15;
  spec.m1 = 2;
  spec.m2 = 3;
  spec.seed = 12;
  NpInstance inst = gen_np_classification(spec);
  std::string path = "vrvi_test_np.bin";
  FileGuard guard{path};
  save_instance(path, inst);
  LoadedInstance loaded = load_instance(path);
  CHECK(loaded.kind == InstanceKind::kNeymanPearson);
  REQUIRE(loaded.np.has_value());
  const NpInstance& got = *loaded.np;
  CHECK(matrices_equal(got.class0, inst.class0));
  CHECK(matrices_equal(got.class1, inst.class1));
  CHECK(got.spec.dim == 4);
  CHECK(got.spec.n0 == 6);
  CHECK(got.spec.n1 == 5);
  CHECK(got.spec.loss == NpLoss::kLogistic);
  CHECK(got.spec.lambda == 2.5);
  CHECK(got.spec.r1 == 0.15);
  CHECK(got.spec.m1 == 2);
  CHECK(got.spec.m2 == 3);
  CHECK(got.spec.seed == 12);
}

TEST_CASE("corrupted headers and truncated payloads are rejected with the path") {
  InstanceData inst = sample_linear();
  std::string path = "vrvi_test_corrupt.bin";
  FileGuard guard{path};
  save_instance(path, inst);

  // Flip the magic.
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.put('X');
  }
  try {
    load_instance(path);
    FAIL("expected a format error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(path) != std::string::npos);
  }

  // Rewrite, then truncate the payload.
  save_instance(path, inst);
  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
  out.close();
  CHECK_THROWS_AS(load_instance(path), ConfigError);

  // Unknown kind byte.
  std::ofstream bad(path, std::ios::binary | std::ios::trunc);
  bad << "VRVI1" << '\x09';
  bad.close();
  CHECK_THROWS_AS(load_instance(path), ConfigError);
}

TEST_CASE("missing files and unwritable targets raise io errors") {
  CHECK_THROWS_AS(load_instance("no_such_file.bin"), IoError);
  InstanceData inst = sample_linear();
  CHECK_THROWS_AS(save_instance("no_such_dir/inst.bin", inst), IoError);
}
