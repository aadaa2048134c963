// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#include "vrvi/serialize.hpp"

#include <cstring>
#include <fstream>

namespace vrvi {

namespace {

constexpr char kMagic[5] = {'V', 'R', 'V', 'I', '1'};

class Writer {
 public:
  explicit Writer(const std::string& path) : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw IoError("save_instance: cannot open " + path);
  }
  void u8(unsigned char v) { out_.put(static_cast<char>(v)); }
  void u64(std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out_.write(b, 8);
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    u64(bits);
  }
  void vec(const Vector& v) {
    u64(static_cast<std::uint64_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) f64(v[i]);
  }
  void mat(const Matrix& m) {
    u64(static_cast<std::uint64_t>(m.rows()));
    u64(static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index r = 0; r < m.rows(); ++r) f64(m(r, c));
  }
  void finish() {
    out_.flush();
    if (!out_) throw IoError("save_instance: write failed for " + path_);
  }

 private:
  std::ofstream out_;
  std::string path_;
};

class Reader {
 public:
  explicit Reader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw IoError("load_instance: cannot open " + path);
  }
  unsigned char u8() {
    int c = in_.get();
    if (c == EOF) fail("unexpected end of file");
    return static_cast<unsigned char>(c);
  }
  std::uint64_t u64() {
    char b[8];
    if (!in_.read(b, 8)) fail("unexpected end of file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
  }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() {
    std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
  Vector vec() {
    std::uint64_t n = u64();
    if (n > (1u << 26)) fail("vector size out of range");
    Vector v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = f64();
    return v;
  }
  Matrix mat() {
    std::uint64_t rows = u64(), cols = u64();
    if (rows > (1u << 20) || cols > (1u << 20) || rows * cols > (1u << 26))
      fail("matrix size out of range");
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = f64();
    return m;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw ConfigError("load_instance: " + path_ + ": " + what);
  }

 private:
  std::ifstream in_;
  std::string path_;
};

void write_set(Writer& w, const ConstraintSet& s) {
  w.u8(static_cast<unsigned char>(s.kind()));
  switch (s.kind()) {
    case ConstraintSet::Kind::kWhole:
    case ConstraintSet::Kind::kNonnegOrthant:
      w.u64(static_cast<std::uint64_t>(s.dim()));
      break;
    case ConstraintSet::Kind::kBall:
      w.vec(s.center());
      w.f64(s.radius());
      break;
    case ConstraintSet::Kind::kBox:
      w.vec(s.lo());
      w.vec(s.hi());
      break;
    case ConstraintSet::Kind::kProduct:
      w.u64(s.blocks().size());
      for (const auto& b : s.blocks()) write_set(w, b);
      break;
  }
}

ConstraintSet read_set(Reader& r, int depth = 0) {
  if (depth > 16) r.fail("constraint set nesting too deep");
  auto kind = static_cast<ConstraintSet::Kind>(r.u8());
  switch (kind) {
    case ConstraintSet::Kind::kWhole:
      return ConstraintSet::whole(static_cast<int>(r.u64()));
    case ConstraintSet::Kind::kNonnegOrthant:
      return ConstraintSet::nonneg_orthant(static_cast<int>(r.u64()));
    case ConstraintSet::Kind::kBall: {
      Vector c = r.vec();
      double rad = r.f64();
      return ConstraintSet::ball(std::move(c), rad);
    }
    case ConstraintSet::Kind::kBox: {
      Vector lo = r.vec();
      Vector hi = r.vec();
      return ConstraintSet::box(std::move(lo), std::move(hi));
    }
    case ConstraintSet::Kind::kProduct: {
      std::uint64_t n = r.u64();
      if (n == 0 || n > 64) r.fail("product block count out of range");
      std::vector<ConstraintSet> blocks;
      blocks.reserve(n);
      for (std::uint64_t i = 0; i < n; ++i) blocks.push_back(read_set(r, depth + 1));
      return ConstraintSet::product(std::move(blocks));
    }
  }
  r.fail("unknown constraint set kind");
}

void write_header(Writer& w, InstanceKind kind) {
  for (char c : kMagic) w.u8(static_cast<unsigned char>(c));
  w.u8(static_cast<unsigned char>(kind));
}

}  // namespace

void save_instance(const std::string& path, const InstanceData& inst) {
  Writer w(path);
  write_header(w, InstanceKind::kLinearQuadratic);
  w.u64(inst.A.size());
  for (std::size_t i = 0; i < inst.A.size(); ++i) {
    w.mat(inst.A[i]);
    w.vec(inst.b[i]);
  }
  w.u64(inst.G.size());
  for (std::size_t i = 0; i < inst.G.size(); ++i) {
    w.mat(inst.G[i]);
    w.vec(inst.c[i]);
  }
  w.f64(inst.mu_h);
  write_set(w, inst.set);
  w.vec(inst.x0.size() ? inst.x0 : Vector(0));
  w.u8(inst.x_star ? 1 : 0);
  if (inst.x_star) w.vec(*inst.x_star);
  w.finish();
}

void save_instance(const std::string& path, const NpInstance& inst) {
  Writer w(path);
  write_header(w, InstanceKind::kNeymanPearson);
  w.mat(inst.class0);
  w.mat(inst.class1);
  w.i64(inst.spec.dim);
  w.i64(inst.spec.n0);
  w.i64(inst.spec.n1);
  w.u8(inst.spec.loss == NpLoss::kSmoothedHinge ? 0 : 1);
  w.f64(inst.spec.lambda);
  w.f64(inst.spec.r1);
  w.i64(inst.spec.m1);
  w.i64(inst.spec.m2);
  w.u64(inst.spec.seed);
  w.finish();
}

LoadedInstance load_instance(const std::string& path) {
  Reader r(path);
  for (char c : kMagic)
    if (r.u8() != static_cast<unsigned char>(c)) r.fail("bad magic (not a problem file)");
  auto kind = static_cast<InstanceKind>(r.u8());
  LoadedInstance out;
  out.kind = kind;
  if (kind == InstanceKind::kLinearQuadratic) {
    InstanceData inst;
    std::uint64_t m1 = r.u64();
    if (m1 > 4096) r.fail("component count out of range");
    for (std::uint64_t i = 0; i < m1; ++i) {
      inst.A.push_back(r.mat());
      inst.b.push_back(r.vec());
    }
    std::uint64_t m2 = r.u64();
    if (m2 > 4096) r.fail("component count out of range");
    for (std::uint64_t i = 0; i < m2; ++i) {
      inst.G.push_back(r.mat());
      inst.c.push_back(r.vec());
    }
    inst.mu_h = r.f64();
    inst.set = read_set(r);
    inst.x0 = r.vec();
    if (r.u8()) inst.x_star = r.vec();
    out.linear = std::move(inst);
  } else if (kind == InstanceKind::kNeymanPearson) {
    NpInstance inst;
    inst.class0 = r.mat();
    inst.class1 = r.mat();
    inst.spec.dim = static_cast<int>(r.i64());
    inst.spec.n0 = static_cast<int>(r.i64());
    inst.spec.n1 = static_cast<int>(r.i64());
    inst.spec.loss = r.u8() == 0 ? NpLoss::kSmoothedHinge : NpLoss::kLogistic;
    inst.spec.lambda = r.f64();
    inst.spec.r1 = r.f64();
    inst.spec.m1 = static_cast<int>(r.i64());
    inst.spec.m2 = static_cast<int>(r.i64());
    inst.spec.seed = r.u64();
    out.np = std::move(inst);
  } else {
    r.fail("unknown instance kind tag");
  }
  return out;
}

}  // namespace vrvi
