#include "courantkit/scalar.hpp"

#include <cmath>
#include <sstream>

namespace ck {

ChartPtr merge_charts(const ChartPtr& a, const ChartPtr& b) {
  if (!a) return b;
  if (!b) return a;
  if (a.get() != b.get())
    throw DomainError("operands bound to different charts: '" + a->name() + "' vs '" +
                      b->name() + "'");
  return a;
}

Scalar Scalar::coordinate(ChartPtr chart, int i) {
  if (i < 0 || i >= chart->dim()) throw DomainError("coordinate index out of range");
  return Scalar(std::move(chart), Expr::var(i));
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  return Scalar(merge_charts(a.chart_, b.chart_), a.expr_ + b.expr_);
}
Scalar operator-(const Scalar& a, const Scalar& b) {
  return Scalar(merge_charts(a.chart_, b.chart_), a.expr_ - b.expr_);
}
Scalar operator*(const Scalar& a, const Scalar& b) {
  return Scalar(merge_charts(a.chart_, b.chart_), a.expr_ * b.expr_);
}
Scalar operator/(const Scalar& a, const Scalar& b) {
  return Scalar(merge_charts(a.chart_, b.chart_), a.expr_ / b.expr_);
}
Scalar operator-(const Scalar& a) { return Scalar(a.chart_, -a.expr_); }

Scalar Scalar::partial(int i) const {
  if (chart_ && (i < 0 || i >= chart_->dim()))
    throw DomainError("partial: coordinate index out of range");
  return Scalar(chart_, expr_.diff(i));
}

std::string Scalar::str() const {
  static const std::vector<std::string> fallback = {"x0", "x1", "x2", "x3", "x4", "x5"};
  return expr_.str(chart_ ? std::span<const std::string>(chart_->coords())
                          : std::span<const std::string>(fallback));
}

Scalar parse_expr(const std::string& text, const ChartPtr& chart, const Tolerances& tol) {
  Expr e = parse_expr_text(text, chart->coords());
  Scalar s(chart, e);
  // Divisor floors and finiteness are enforced at the chart's own samples.
  for (const auto& p : chart->samples()) s.eval(p, tol.denom_floor);
  return s;
}

IdentityReport identical_on_samples(const Scalar& a, const Scalar& b, double tol,
                                    int extra_points, uint64_t seed) {
  ChartPtr chart = merge_charts(a.chart(), b.chart());
  if (!chart) throw DomainError("identity check on detached constants needs a chart");
  IdentityReport rep;
  auto points = chart->eval_points(extra_points, seed);
  rep.points_checked = static_cast<int>(points.size());
  for (const auto& p : points) {
    double va = a.eval(p);
    double vb = b.eval(p);
    double abs_res = std::abs(va - vb);
    double rel = abs_res / (1.0 + std::max(std::abs(va), std::abs(vb)));
    if (rel > rep.worst_residual) {
      rep.worst_residual = rel;
      rep.worst_abs = abs_res;
      rep.worst_point = p;
    }
  }
  rep.pass = rep.worst_residual <= tol;
  return rep;
}

std::string IdentityReport::describe() const {
  std::ostringstream os;
  os << (pass ? "pass" : "FAIL") << " worst=" << worst_residual << " at (";
  for (size_t i = 0; i < worst_point.size(); ++i) {
    if (i) os << ", ";
    os << worst_point[i];
  }
  os << ") over " << points_checked << " points";
  return os.str();
}

double finite_difference(const Scalar& s, std::span<const double> point, int i, double h) {
  std::vector<double> plus(point.begin(), point.end());
  std::vector<double> minus(point.begin(), point.end());
  plus[static_cast<size_t>(i)] += h;
  minus[static_cast<size_t>(i)] -= h;
  return (s.eval(plus) - s.eval(minus)) / (2 * h);
}

}  // namespace ck
