// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#include "vrvi/problem.hpp"

namespace vrvi {

Vector CompositeVIProblem::start_point() const {
  if (x0.size() == static_cast<Eigen::Index>(dim())) return x0;
  return set.project(Vector::Zero(dim()));
}

Vector CompositeVIProblem::exact_full(const Vector& x) const {
  Vector out = Vector::Zero(x.size());
  if (!h.empty()) out += h.exact_sum(x);
  if (!g.empty()) out += g.exact_sum(x);
  return out;
}

double residual_norm(const CompositeVIProblem& p, const Vector& x) {
  return p.exact_full(x).norm();
}

GapEvaluator make_gap_evaluator(const CompositeVIProblem& p) {
  if (!p.x_star) throw ConfigError("make_gap_evaluator: problem has no reference solution");
  if (!p.g_values_available())
    throw ConfigError("make_gap_evaluator: gradient components lack value functions");
  auto h_sum = [&p](const Vector& x) {
    return p.h.empty() ? Vector(Vector::Zero(x.size())) : p.h.exact_sum(x);
  };
  const CompositeVIProblem* pp = &p;
  return GapEvaluator(*p.x_star, h_sum, [pp](const Vector& x) { return pp->g_value(x); });
}

MetricsEval::MetricsEval(const CompositeVIProblem& p) : p_(&p) {
  if (p.x_star && p.g_values_available() && (p.h.empty() || p.h.has_exact()))
    gap_.emplace(make_gap_evaluator(p));
}

double MetricsEval::dist_sq(const Vector& point) const {
  if (!p_->x_star) return std::numeric_limits<double>::quiet_NaN();
  return (point - *p_->x_star).squaredNorm();
}

void MetricsEval::fill(TraceRecord& t, const Vector& point) const {
  if (p_->x_star) t.dist_sq = dist_sq(point);
  if (gap_) t.q_gap = (*gap_)(point);
  if (p_->exact_available()) t.res_norm = residual_norm(*p_, point);
  if (p_->cons_viol) t.cons_viol = p_->cons_viol(point);
  if (p_->f_star && p_->g_values_available()) t.obj_gap = p_->g_value(point) - *p_->f_star;
}

}  // namespace vrvi
