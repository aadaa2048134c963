// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#include "vrvi/core.hpp"

#include <cmath>

namespace vrvi {

ConstraintSet ConstraintSet::whole(int dim) {
  if (dim <= 0) throw ConfigError("ConstraintSet: dim must be positive");
  ConstraintSet s;
  s.kind_ = Kind::kWhole;
  s.dim_ = dim;
  return s;
}

ConstraintSet ConstraintSet::ball(Vector center, double radius) {
  if (!(radius > 0)) throw ConfigError("ConstraintSet: ball radius must be positive");
  ConstraintSet s;
  s.kind_ = Kind::kBall;
  s.dim_ = static_cast<int>(center.size());
  s.center_ = std::move(center);
  s.radius_ = radius;
  return s;
}

ConstraintSet ConstraintSet::nonneg_orthant(int dim) {
  if (dim <= 0) throw ConfigError("ConstraintSet: dim must be positive");
  ConstraintSet s;
  s.kind_ = Kind::kNonnegOrthant;
  s.dim_ = dim;
  return s;
}

ConstraintSet ConstraintSet::box(Vector lo, Vector hi) {
  if (lo.size() != hi.size()) throw ConfigError("ConstraintSet: box lo/hi dims differ");
  if ((lo.array() > hi.array()).any())
    throw ConfigError("ConstraintSet: box requires lo <= hi coordinatewise");
  ConstraintSet s;
  s.kind_ = Kind::kBox;
  s.dim_ = static_cast<int>(lo.size());
  s.lo_ = std::move(lo);
  s.hi_ = std::move(hi);
  return s;
}

ConstraintSet ConstraintSet::product(std::vector<ConstraintSet> blocks) {
  if (blocks.empty()) throw ConfigError("ConstraintSet: product of zero blocks");
  ConstraintSet s;
  s.kind_ = Kind::kProduct;
  s.dim_ = 0;
  for (const auto& b : blocks) s.dim_ += b.dim();
  s.blocks_ = std::move(blocks);
  return s;
}

Vector ConstraintSet::project(const Vector& p) const {
  if (p.size() != dim_)
    throw std::invalid_argument("project: point dim " + std::to_string(p.size()) +
                                " does not match set dim " + std::to_string(dim_));
  switch (kind_) {
    case Kind::kWhole:
      return p;
    case Kind::kBall: {
      Vector d = p - center_;
      double n = d.norm();
      if (n <= radius_) return p;
      return center_ + (radius_ / n) * d;
    }
    case Kind::kNonnegOrthant:
      return p.cwiseMax(0.0);
    case Kind::kBox:
      return p.cwiseMax(lo_).cwiseMin(hi_);
    case Kind::kProduct: {
      Vector out(dim_);
      int off = 0;
      for (const auto& b : blocks_) {
        out.segment(off, b.dim()) = b.project(p.segment(off, b.dim()));
        off += b.dim();
      }
      return out;
    }
  }
  throw std::logic_error("project: unreachable");
}

bool ConstraintSet::contains(const Vector& p, double tol) const {
  if (p.size() != dim_) return false;
  switch (kind_) {
    case Kind::kWhole:
      return true;
    case Kind::kBall:
      return (p - center_).norm() <= radius_ + tol;
    case Kind::kNonnegOrthant:
      return (p.array() >= -tol).all();
    case Kind::kBox:
      return (p.array() >= lo_.array() - tol).all() && (p.array() <= hi_.array() + tol).all();
    case Kind::kProduct: {
      int off = 0;
      for (const auto& b : blocks_) {
        if (!b.contains(p.segment(off, b.dim()), tol)) return false;
        off += b.dim();
      }
      return true;
    }
  }
  return false;
}

std::optional<double> ConstraintSet::diameter() const {
  switch (kind_) {
    case Kind::kWhole:
    case Kind::kNonnegOrthant:
      return std::nullopt;
    case Kind::kBall:
      return 2.0 * radius_;
    case Kind::kBox:
      return (hi_ - lo_).norm();
    case Kind::kProduct: {
      double sq = 0;
      for (const auto& b : blocks_) {
        auto d = b.diameter();
        if (!d) return std::nullopt;
        sq += *d * *d;
      }
      return std::sqrt(sq);
    }
  }
  return std::nullopt;
}

GapEvaluator::GapEvaluator(Vector x_star, const std::function<Vector(const Vector&)>& h_sum,
                           std::function<double(const Vector&)> g_value)
    : x_star_(std::move(x_star)), g_value_(std::move(g_value)) {
  h_at_star_ = h_sum ? h_sum(x_star_) : Vector(Vector::Zero(x_star_.size()));
  g_at_star_ = g_value_ ? g_value_(x_star_) : 0.0;
}

double GapEvaluator::operator()(const Vector& x_prime) const {
  if (x_prime.size() != x_star_.size())
    throw std::invalid_argument("q_gap: dimension mismatch");
  double g = g_value_ ? g_value_(x_prime) : 0.0;
  return h_at_star_.dot(x_prime - x_star_) + g - g_at_star_;
}

void check_finite(const Vector& v, const char* label) {
  if (!v.allFinite())
    throw std::invalid_argument(std::string(label) + ": non-finite coordinates");
}

}  // namespace vrvi
