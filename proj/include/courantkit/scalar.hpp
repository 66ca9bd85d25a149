#pragma once

#include <string>
#include <vector>

#include "courantkit/chart.hpp"
#include "courantkit/expr.hpp"

namespace ck {

struct Tolerances {
  double identity = 1e-9;     // relative sampled-identity tolerance
  double fd = 1e-5;           // finite-difference consistency
  double denom_floor = 1e-6;  // divisor magnitude floor
  double projection = 1e-8;   // algebra-coordinate conversion residual gate
  double mod1 = 1e-9;         // circle-valued comparisons
  int extra_points = 32;      // pseudo-random box points added to chart samples
  uint64_t seed = kDefaultSeed;
};

// A symbolic function bound to a chart. A null chart marks a detached constant,
// which combines with any chart-bound operand.
class Scalar {
 public:
  Scalar() : Scalar(Expr::num(Rational{})) {}
  explicit Scalar(Expr e) : chart_(nullptr), expr_(std::move(e)) {}
  Scalar(ChartPtr chart, Expr e) : chart_(std::move(chart)), expr_(std::move(e)) {}

  static Scalar constant(long long n) { return Scalar(Expr::integer(n)); }
  static Scalar constant(Rational r) { return Scalar(Expr::num(r)); }
  static Scalar coordinate(ChartPtr chart, int i);

  const ChartPtr& chart() const { return chart_; }
  const Expr& expr() const { return expr_; }
  bool is_zero() const { return expr_.is_zero(); }

  friend Scalar operator+(const Scalar&, const Scalar&);
  friend Scalar operator-(const Scalar&, const Scalar&);
  friend Scalar operator*(const Scalar&, const Scalar&);
  friend Scalar operator/(const Scalar&, const Scalar&);
  friend Scalar operator-(const Scalar&);
  Scalar pow(int e) const { return Scalar(chart_, expr_.pow(e)); }

  static Scalar sin(const Scalar& s) { return Scalar(s.chart_, Expr::sin(s.expr_)); }
  static Scalar cos(const Scalar& s) { return Scalar(s.chart_, Expr::cos(s.expr_)); }
  static Scalar exp(const Scalar& s) { return Scalar(s.chart_, Expr::exp(s.expr_)); }

  Scalar partial(int i) const;

  double eval(std::span<const double> point, double denom_floor = 1e-6) const {
    return expr_.eval(point, denom_floor);
  }

  std::string str() const;

 private:
  ChartPtr chart_;
  Expr expr_;
};

// Parses text in the chart's coordinates and validates divisor floors and
// finiteness at all chart samples.
Scalar parse_expr(const std::string& text, const ChartPtr& chart,
                  const Tolerances& tol = Tolerances{});

// Merges chart bindings of two operands: equal pointers, or one side detached.
ChartPtr merge_charts(const ChartPtr& a, const ChartPtr& b);

struct IdentityReport {
  bool pass = true;
  double worst_residual = 0.0;  // relative: |a-b| / (1 + max(|a|,|b|))
  double worst_abs = 0.0;
  std::vector<double> worst_point;
  int points_checked = 0;

  std::string describe() const;
};

// Sampled-identity oracle: compares a and b at chart samples plus extra
// deterministic box points, with relative tolerance `tol`.
IdentityReport identical_on_samples(const Scalar& a, const Scalar& b, double tol = 1e-9,
                                    int extra_points = 32, uint64_t seed = kDefaultSeed);

// Central finite difference, the independent oracle for partial().
double finite_difference(const Scalar& s, std::span<const double> point, int i, double h = 1e-5);

}  // namespace ck
