// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#include "vrvi/problems.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "vrvi/baselines.hpp"
#include "vrvi/rng.hpp"

namespace vrvi {

namespace {

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double sym_lambda_max(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

Matrix random_matrix(CounterRng& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

// λmax of Σ rows ξξᵀ, exact for moderate dims, Σ||ξ||² bound otherwise.
double gram_lambda_max(const Matrix& rows) {
  if (rows.rows() == 0) return 0.0;
  if (rows.cols() <= 512) return sym_lambda_max(rows.transpose() * rows);
  return rows.rowwise().squaredNorm().sum();
}

}  // namespace

CompositeVIProblem make_problem(const InstanceData& inst) {
  const int n = inst.set.dim();
  if (inst.A.size() != inst.b.size() || inst.G.size() != inst.c.size())
    throw ConfigError("make_problem: matrix/offset counts differ");
  CompositeVIProblem p;
  p.set = inst.set;
  p.mu_h = inst.mu_h;
  p.h = ComponentFamily(n);
  for (std::size_t i = 0; i < inst.A.size(); ++i) {
    const Matrix& a = inst.A[i];
    const Vector& bv = inst.b[i];
    if (a.rows() != n || a.cols() != n || bv.size() != n)
      throw ConfigError("make_problem: general component dimension mismatch");
    Component c;
    c.exact = [a, bv](const Vector& x) -> Vector { return a * x + bv; };
    p.h.add(std::move(c), spectral_norm(a));
  }
  p.g = ComponentFamily(n);
  for (std::size_t i = 0; i < inst.G.size(); ++i) {
    const Matrix& gm = inst.G[i];
    const Vector& cv = inst.c[i];
    if (gm.rows() != n || gm.cols() != n || cv.size() != n)
      throw ConfigError("make_problem: gradient component dimension mismatch");
    Component c;
    c.exact = [gm, cv](const Vector& x) -> Vector { return gm * x + cv; };
    c.value = [gm, cv](const Vector& x) { return 0.5 * x.dot(gm * x) + cv.dot(x); };
    p.g.add(std::move(c), sym_lambda_max(gm));
  }
  p.x0 = inst.x0;
  p.x_star = inst.x_star;
  return p;
}

InstanceData gen_strongly_monotone(const SyntheticSpec& spec) {
  if (spec.dim < 1) throw ConfigError("gen_strongly_monotone: dim must be >= 1");
  if (spec.m1 < 2) throw ConfigError("gen_strongly_monotone: m1 must be >= 2");
  if (spec.m2 < 0) throw ConfigError("gen_strongly_monotone: m2 must be nonnegative");
  if (!(spec.mu_h > 0)) throw ConfigError("gen_strongly_monotone: mu_h must be positive");
  if (spec.L_h < spec.mu_h)
    throw ConfigError("gen_strongly_monotone: infeasible spec (L_h < mu_h)");
  if (spec.m2 > 0 && !(spec.L_g > 0))
    throw ConfigError("gen_strongly_monotone: L_g must be positive when m2 > 0");

  const int n = spec.dim, m1 = spec.m1, m2 = spec.m2;
  CounterRng rng(spec.seed, stream::kInit);

  Matrix r0 = random_matrix(rng, n, n);
  Matrix skew = 0.5 * (r0 - r0.transpose());
  double sn = spectral_norm(skew);
  if (sn > 0) skew /= sn;
  Matrix psd = Matrix::Zero(n, n);
  if (n >= 2) {
    Matrix w = random_matrix(rng, n, n - 1);
    psd = w * w.transpose();  // rank-deficient, so λmin stays 0
    psd /= spectral_norm(psd);
  }
  Matrix base = skew + psd;

  std::vector<Matrix> balance(m1);
  Matrix mean = Matrix::Zero(n, n);
  for (int i = 0; i < m1; ++i) {
    balance[i] = random_matrix(rng, n, n);
    balance[i] /= spectral_norm(balance[i]);
    mean += balance[i] / m1;
  }
  for (int i = 0; i < m1; ++i) balance[i] -= mean;

  Matrix eye = Matrix::Identity(n, n);
  auto component = [&](double c, int i) -> Matrix {
    return (spec.mu_h * eye + c * base) / m1 + c * balance[i];
  };
  auto norm_sum = [&](double c) {
    double s = 0;
    for (int i = 0; i < m1; ++i) s += spectral_norm(component(c, i));
    return s;
  };

  double c_star = 0;
  if (spec.L_h - spec.mu_h > 1e-12 * std::max(1.0, spec.L_h)) {
    double lo = 0, hi = 1;
    int guard = 0;
    while (norm_sum(hi) < spec.L_h) {
      hi *= 2;
      if (++guard > 200) throw ConfigError("gen_strongly_monotone: scale search failed");
    }
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (lo + hi);
      if (norm_sum(mid) < spec.L_h)
        lo = mid;
      else
        hi = mid;
    }
    c_star = 0.5 * (lo + hi);
  }

  InstanceData inst;
  inst.mu_h = spec.mu_h;
  inst.A.reserve(m1);
  for (int i = 0; i < m1; ++i) inst.A.push_back(component(c_star, i));

  for (int i = 0; i < m2; ++i) {
    Matrix w = random_matrix(rng, n, n);
    Matrix gm = w * w.transpose();
    gm *= (spec.L_g / m2) / spectral_norm(gm);
    inst.G.push_back(gm);
    inst.c.push_back(rng.gaussian(n));
  }

  Vector x_target = rng.sphere(n);
  Matrix total = Matrix::Zero(n, n);
  for (const auto& a : inst.A) total += a;
  for (const auto& gm : inst.G) total += gm;
  Vector drift = Vector::Zero(n);
  for (const auto& cv : inst.c) drift += cv;
  Vector b_total = -(total * x_target) - drift;
  Vector off_mean = Vector::Zero(n);
  std::vector<Vector> raw(m1);
  for (int i = 0; i < m1; ++i) {
    raw[i] = rng.gaussian(n);
    off_mean += raw[i] / m1;
  }
  inst.b.reserve(m1);
  for (int i = 0; i < m1; ++i) inst.b.push_back(raw[i] - off_mean + b_total / m1);

  if (spec.set_variant == SetVariant::kWhole) {
    inst.set = ConstraintSet::whole(n);
    inst.x_star = x_target;
    inst.x0 = x_target + rng.sphere(n);
  } else {
    inst.set = ConstraintSet::ball(Vector::Zero(n), 0.8 * x_target.norm());
    inst.x0 = inst.set.project(x_target + rng.sphere(n));
    CompositeVIProblem p = make_problem(inst);
    ExtragradientParams eg;
    eg.tol = 1e-12;
    BaselineResult ref = solve_extragradient(p, eg);
    if (!ref.converged)
      throw ConfigError("gen_strongly_monotone: reference solve did not converge");
    inst.x_star = ref.x;
  }
  return inst;
}

InstanceData gen_bilinear_monotone(int n_x, int n_y, int m1, std::uint64_t seed) {
  if (n_x < 1 || n_y < 1) throw ConfigError("gen_bilinear_monotone: dims must be >= 1");
  if (m1 < 1) throw ConfigError("gen_bilinear_monotone: m1 must be >= 1");
  CounterRng rng(seed, stream::kInit);
  const int n = n_x + n_y;
  InstanceData inst;
  inst.mu_h = 0;
  for (int i = 0; i < m1; ++i) {
    Matrix bm = random_matrix(rng, n_x, n_y);
    bm *= (1.0 / m1) / spectral_norm(bm);
    Matrix a = Matrix::Zero(n, n);
    a.topRightCorner(n_x, n_y) = bm;
    a.bottomLeftCorner(n_y, n_x) = -bm.transpose();
    inst.A.push_back(a);
    inst.b.push_back(Vector::Zero(n));
  }
  inst.set = ConstraintSet::product({ConstraintSet::ball(Vector::Zero(n_x), 1.0),
                                     ConstraintSet::ball(Vector::Zero(n_y), 1.0)});
  inst.x_star = Vector::Zero(n);
  inst.x0 = inst.set.project(0.5 * rng.gaussian(n));
  return inst;
}

InstanceData attach_quadratic_g(InstanceData inst, int m2, double L_g, std::uint64_t seed) {
  if (m2 < 1) throw ConfigError("attach_quadratic_g: m2 must be >= 1");
  if (!(L_g > 0)) throw ConfigError("attach_quadratic_g: L_g must be positive");
  const int n = inst.set.dim();
  CounterRng rng(seed, stream::kComponent);
  std::vector<Vector> raw(m2);
  Vector mean = Vector::Zero(n);
  for (int i = 0; i < m2; ++i) {
    Matrix w = random_matrix(rng, n, n);
    Matrix gm = w * w.transpose();
    gm *= (L_g / m2) / spectral_norm(gm);
    inst.G.push_back(gm);
    raw[i] = rng.gaussian(n);
    mean += raw[i] / m2;
  }
  for (int i = 0; i < m2; ++i) inst.c.push_back(raw[i] - mean);  // Σc_i = 0
  if (inst.x_star && inst.x_star->norm() > 0) inst.x_star.reset();  // stale reference
  return inst;
}

ParamReport certify_instance(const CompositeVIProblem& p, int pairs, std::uint64_t seed) {
  ParamReport rep;
  if (!p.exact_available()) {
    rep.checks.push_back({"exact evaluations available", -1.0});
    return rep;
  }
  const int n = p.dim();
  const double rel = 1e-9;
  CounterRng rng(seed, stream::kInit);
  double inf = std::numeric_limits<double>::infinity();
  double mono_h = inf, mono_g = inf, lip_h = inf, lip_g = inf;
  for (int k = 0; k < pairs; ++k) {
    double scale = (k % 3 == 0) ? 0.1 : (k % 3 == 1) ? 1.0 : 10.0;
    Vector z1 = p.set.project(scale * rng.gaussian(n));
    Vector z2 = p.set.project(scale * rng.gaussian(n));
    double d = (z1 - z2).norm();
    if (d < 1e-12) continue;
    if (!p.h.empty()) {
      Vector sum = Vector::Zero(n);
      for (int i = 0; i < p.h.size(); ++i) {
        Vector diff = p.h.eval_exact(i, z1) - p.h.eval_exact(i, z2);
        double li = p.h.lipschitz()[i];
        lip_h = std::min(lip_h, li * (1.0 + rel) - diff.norm() / d);
        sum += diff;
      }
      mono_h = std::min(mono_h, sum.dot(z1 - z2) / (d * d) - p.mu_h + rel * (1.0 + p.mu_h));
    }
    if (!p.g.empty()) {
      Vector sum = Vector::Zero(n);
      for (int i = 0; i < p.g.size(); ++i) {
        Vector diff = p.g.eval_exact(i, z1) - p.g.eval_exact(i, z2);
        double li = p.g.lipschitz()[i];
        lip_g = std::min(lip_g, li * (1.0 + rel) - diff.norm() / d);
        sum += diff;
      }
      mono_g = std::min(mono_g, sum.dot(z1 - z2) / (d * d) + rel);
    }
  }
  rep.checks.push_back({"general family strong monotonicity", p.h.empty() ? 0.0 : mono_h});
  rep.checks.push_back({"general family per-component Lipschitz", p.h.empty() ? 0.0 : lip_h});
  rep.checks.push_back({"gradient family monotonicity", p.g.empty() ? 0.0 : mono_g});
  rep.checks.push_back({"gradient family per-component Lipschitz", p.g.empty() ? 0.0 : lip_g});
  return rep;
}

double smoothed_hinge(double t) {
  if (t <= 0) return 0.5 - t;
  if (t <= 1) return 0.5 * (1.0 - t) * (1.0 - t);
  return 0.0;
}

double smoothed_hinge_grad(double t) {
  if (t <= 0) return -1.0;
  if (t <= 1) return -(1.0 - t);
  return 0.0;
}

double logistic_loss(double t) {
  return t >= 0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t));
}

double logistic_grad(double t) {
  if (t >= 0) {
    double e = std::exp(-t);
    return -e / (1.0 + e);
  }
  return -1.0 / (1.0 + std::exp(t));
}

NpInstance gen_np_classification(const NpSpec& spec) {
  if (spec.dim < 1 || spec.n0 < 1 || spec.n1 < 1)
    throw ConfigError("gen_np_classification: dim/n0/n1 must be >= 1");
  CounterRng rng(spec.seed, stream::kInit);
  Vector mean = Vector::Constant(spec.dim, 2.0 / std::sqrt(static_cast<double>(spec.dim)));
  NpInstance inst;
  inst.spec = spec;
  inst.class0.resize(spec.n0, spec.dim);
  inst.class1.resize(spec.n1, spec.dim);
  for (int j = 0; j < spec.n0; ++j)
    inst.class0.row(j) = (mean + rng.gaussian(spec.dim)).transpose();
  for (int j = 0; j < spec.n1; ++j)
    inst.class1.row(j) = (-mean + rng.gaussian(spec.dim)).transpose();
  return inst;
}

namespace {

struct LossFns {
  double (*value)(double);
  double (*grad)(double);
  double curvature;
};

LossFns pick_loss(NpLoss loss) {
  if (loss == NpLoss::kSmoothedHinge) return {smoothed_hinge, smoothed_hinge_grad, 1.0};
  return {logistic_loss, logistic_grad, 0.25};
}

}  // namespace

ConstrainedProgram make_np_program(const NpInstance& inst, double dual_cap) {
  const NpSpec& s = inst.spec;
  const int n = s.dim;
  if (inst.class0.cols() != n || inst.class1.cols() != n)
    throw ConfigError("make_np_program: data width does not match spec.dim");
  const int n0 = static_cast<int>(inst.class0.rows());
  const int n1 = static_cast<int>(inst.class1.rows());
  if (s.m2 < 1 || s.m2 > n0 || s.m1 < 1 || s.m1 > n1)
    throw ConfigError("make_np_program: block counts must be in [1, point count]");
  if (!(s.lambda > 0) || !(dual_cap > 0))
    throw ConfigError("make_np_program: lambda and dual_cap must be positive");
  LossFns fns = pick_loss(s.loss);

  ConstrainedProgram prog;
  prog.primal_set = ConstraintSet::ball(Vector::Zero(n), s.lambda);
  prog.ell = 1;

  const double inv_n0 = 1.0 / n0;
  for (int blk = 0; blk < s.m2; ++blk) {
    int lo = blk * n0 / s.m2, hi = (blk + 1) * n0 / s.m2;
    Matrix rows = inst.class0.middleRows(lo, hi - lo);
    ObjectiveComponent oc;
    oc.value = [rows, inv_n0, fns](const Vector& x) {
      double v = 0;
      for (Eigen::Index r = 0; r < rows.rows(); ++r) v += fns.value(rows.row(r).dot(x));
      return inv_n0 * v;
    };
    oc.gradient = [rows, inv_n0, fns](const Vector& x) -> Vector {
      Vector g = Vector::Zero(x.size());
      for (Eigen::Index r = 0; r < rows.rows(); ++r)
        g += fns.grad(rows.row(r).dot(x)) * rows.row(r).transpose();
      return inv_n0 * g;
    };
    oc.lipschitz = fns.curvature * inv_n0 * gram_lambda_max(rows);
    prog.objective.push_back(std::move(oc));
  }

  const double inv_n1 = 1.0 / n1;
  for (int blk = 0; blk < s.m1; ++blk) {
    int lo = blk * n1 / s.m1, hi = (blk + 1) * n1 / s.m1;
    Matrix rows = inst.class1.middleRows(lo, hi - lo);
    double offset = s.r1 / s.m1;
    ConstraintBlock cb;
    cb.value = [rows, inv_n1, fns, offset](const Vector& x) -> Vector {
      double v = 0;
      for (Eigen::Index r = 0; r < rows.rows(); ++r) v += fns.value(-rows.row(r).dot(x));
      Vector out(1);
      out[0] = inv_n1 * v - offset;
      return out;
    };
    cb.jacobian = [rows, inv_n1, fns](const Vector& x) -> Matrix {
      Vector g = Vector::Zero(x.size());
      for (Eigen::Index r = 0; r < rows.rows(); ++r)
        g -= fns.grad(-rows.row(r).dot(x)) * rows.row(r).transpose();
      Matrix j(1, x.size());
      j.row(0) = inv_n1 * g.transpose();
      return j;
    };
    // Saddle-map constant over the capped dual domain:
    // ||ΔH_j||² ≤ ((D_y L∇)² + M²)||Δx,Δy||² + M²||Δx||².
    double m_val = inv_n1 * rows.rowwise().norm().sum();
    double l_grad = fns.curvature * inv_n1 * gram_lambda_max(rows);
    cb.lipschitz = std::sqrt(dual_cap * dual_cap * l_grad * l_grad + 2.0 * m_val * m_val);
    prog.constraints.push_back(std::move(cb));
  }
  return prog;
}

KktProblem make_np_kkt(const NpInstance& inst, double dual_cap) {
  return build_kkt_problem(make_np_program(inst, dual_cap), dual_cap,
                           LipschitzMode::kClosedForm);
}

namespace {

double parse_strict_double(const std::string& tok, const std::string& where) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw ConfigError(where + ": malformed number '" + tok + "'");
  return v;
}

long parse_strict_long(const std::string& tok, const std::string& where) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0')
    throw ConfigError(where + ": malformed integer '" + tok + "'");
  return v;
}

}  // namespace

SparseDataset parse_libsvm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("parse_libsvm: cannot open " + path);
  SparseDataset ds;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream iss(line);
    std::string tok;
    if (!(iss >> tok)) continue;  // blank line
    const std::string where = path + ":" + std::to_string(lineno);
    SparseRow row;
    row.label = parse_strict_double(tok, where) > 0 ? 1.0 : -1.0;
    int prev_idx = 0;
    while (iss >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 >= tok.size())
        throw ConfigError(where + ": malformed feature token '" + tok + "'");
      long idx = parse_strict_long(tok.substr(0, colon), where);
      if (idx < 1) throw ConfigError(where + ": feature indices are 1-based");
      if (idx <= prev_idx) throw ConfigError(where + ": feature indices must ascend");
      double val = parse_strict_double(tok.substr(colon + 1), where);
      row.features.emplace_back(static_cast<int>(idx) - 1, val);
      prev_idx = static_cast<int>(idx);
      ds.n_features = std::max(ds.n_features, static_cast<int>(idx));
    }
    ds.rows.push_back(std::move(row));
  }
  return ds;
}

void write_libsvm(const std::string& path, const SparseDataset& ds) {
  std::ofstream out(path);
  if (!out) throw IoError("write_libsvm: cannot open " + path);
  char buf[64];
  for (const auto& row : ds.rows) {
    out << (row.label > 0 ? "1" : "-1");
    for (const auto& [idx, val] : row.features) {
      std::snprintf(buf, sizeof(buf), "%.17g", val);
      out << ' ' << (idx + 1) << ':' << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("write_libsvm: write failed for " + path);
}

NpInstance np_from_dataset(const SparseDataset& ds, NpSpec spec) {
  if (ds.n_features < 1) throw ConfigError("np_from_dataset: dataset has no features");
  std::vector<const SparseRow*> pos, neg;
  for (const auto& row : ds.rows) (row.label > 0 ? pos : neg).push_back(&row);
  if (pos.empty() || neg.empty())
    throw ConfigError("np_from_dataset: both classes must be present");
  auto densify = [&](const std::vector<const SparseRow*>& rows) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), ds.n_features);
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (const auto& [idx, val] : rows[r]->features) m(static_cast<Eigen::Index>(r), idx) = val;
    return m;
  };
  NpInstance inst;
  spec.dim = ds.n_features;
  spec.n0 = static_cast<int>(pos.size());
  spec.n1 = static_cast<int>(neg.size());
  if (spec.m2 > spec.n0 || spec.m1 > spec.n1)
    throw ConfigError("np_from_dataset: more blocks than data points");
  inst.spec = spec;
  inst.class0 = densify(pos);
  inst.class1 = densify(neg);
  return inst;
}

}  // namespace vrvi
