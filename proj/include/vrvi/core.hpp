// vrvi - variance-reduced extra-point solvers for finite-sum variational inequalities
// Copyright 2026 vrvi contributors
// Licensed under Apache 2.0

#ifndef VRVI_CORE_HPP_
#define VRVI_CORE_HPP_

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vrvi {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Raised for invalid user-supplied configuration (bad parameters, malformed
// files, violated parameter constraints). Maps to exit code 2 at the CLI.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a file cannot be opened, read, or written.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an iterate stops being finite. Carries the last finite iterate.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, Vector last_finite, std::int64_t iter)
      : std::runtime_error(what), last_finite_(std::move(last_finite)), iter_(iter) {}
  const Vector& last_finite() const { return last_finite_; }
  std::int64_t iter() const { return iter_; }

 private:
  Vector last_finite_;
  std::int64_t iter_;
};

// Cumulative single-component oracle evaluation counts. A snapshot refresh of
// an m-component family adds m.
struct OracleCounter {
  std::int64_t h_calls = 0;
  std::int64_t g_calls = 0;
  std::int64_t total() const { return h_calls + g_calls; }
};

// Convex feasible sets with exact Euclidean projections. Product projects
// blockwise; diameter of a Product is sqrt(sum of squared block diameters).
class ConstraintSet {
 public:
  enum class Kind { kWhole, kBall, kNonnegOrthant, kBox, kProduct };

  static ConstraintSet whole(int dim);
  static ConstraintSet ball(Vector center, double radius);
  static ConstraintSet nonneg_orthant(int dim);
  static ConstraintSet box(Vector lo, Vector hi);
  static ConstraintSet product(std::vector<ConstraintSet> blocks);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  const Vector& center() const { return center_; }
  double radius() const { return radius_; }
  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }
  const std::vector<ConstraintSet>& blocks() const { return blocks_; }

  Vector project(const Vector& p) const;
  bool contains(const Vector& p, double tol = 1e-12) const;
  // Upper bound on sup ||x - y|| over the set; empty for unbounded sets.
  std::optional<double> diameter() const;
  bool bounded() const { return diameter().has_value(); }

 private:
  ConstraintSet() = default;
  Kind kind_ = Kind::kWhole;
  int dim_ = 0;
  Vector center_;      // kBall
  double radius_ = 0;  // kBall
  Vector lo_, hi_;     // kBox
  std::vector<ConstraintSet> blocks_;  // kProduct
};

// Gap function Q(x'; x*) = <H(x*), x' - x*> + g(x') - g(x*), the merit
// measure used by the monotone-solver analysis. H(x*) and g(x*) are frozen at
// construction so repeated evaluations stay cheap.
class GapEvaluator {
 public:
  GapEvaluator(Vector x_star, const std::function<Vector(const Vector&)>& h_sum,
               std::function<double(const Vector&)> g_value);

  double operator()(const Vector& x_prime) const;
  const Vector& x_star() const { return x_star_; }

 private:
  Vector x_star_;
  Vector h_at_star_;
  std::function<double(const Vector&)> g_value_;
  double g_at_star_;
};

inline double q_gap(const GapEvaluator& eval, const Vector& x_prime) {
  return eval(x_prime);
}

// One row of convergence metrics. NaN marks a metric that is not available
// for the problem at hand (no reference solution, not a constrained program).
struct TraceRecord {
  std::int64_t iter = 0;
  std::int64_t epoch = 0;
  std::int64_t oracle_h_calls = 0;
  std::int64_t oracle_g_calls = 0;
  double dist_sq = std::numeric_limits<double>::quiet_NaN();
  double q_gap = std::numeric_limits<double>::quiet_NaN();
  double res_norm = std::numeric_limits<double>::quiet_NaN();
  double cons_viol = std::numeric_limits<double>::quiet_NaN();
  double obj_gap = std::numeric_limits<double>::quiet_NaN();
  double wall_ms = std::numeric_limits<double>::quiet_NaN();
};

using TraceSink = std::function<void(const TraceRecord&)>;

void check_finite(const Vector& v, const char* label);

}  // namespace vrvi

#endif  // VRVI_CORE_HPP_
