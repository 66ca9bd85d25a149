#include "courantkit/groupmap.hpp"

#include <cmath>

namespace ck {

GroupMap::GroupMap(ChartPtr chart, int m, std::vector<Scalar> matrix, Tag tag)
    : chart_(std::move(chart)), m_(m), mat_(std::move(matrix)), tag_(tag) {
  if (static_cast<int>(mat_.size()) != m_ * m_) throw SchemaError("group map matrix size");
  for (auto& s : mat_)
    if (!s.chart()) s = Scalar(chart_, s.expr());
}

GroupMap GroupMap::identity(const ChartPtr& chart, int m, Tag tag) {
  std::vector<Scalar> mat(static_cast<size_t>(m * m), Scalar::constant(0));
  for (int i = 0; i < m; ++i) mat[static_cast<size_t>(i * m + i)] = Scalar::constant(1);
  return GroupMap(chart, m, std::move(mat), tag);
}

GroupMap GroupMap::transpose() const {
  std::vector<Scalar> mat(mat_.size(), Scalar::constant(0));
  for (int r = 0; r < m_; ++r)
    for (int c = 0; c < m_; ++c)
      mat[static_cast<size_t>(c * m_ + r)] = mat_[static_cast<size_t>(r * m_ + c)];
  return GroupMap(chart_, m_, std::move(mat), tag_);
}

Scalar GroupMap::det() const {
  if (m_ == 1) return entry(0, 0);
  if (m_ == 2) return entry(0, 0) * entry(1, 1) - entry(0, 1) * entry(1, 0);
  if (m_ == 3)
    return entry(0, 0) * (entry(1, 1) * entry(2, 2) - entry(1, 2) * entry(2, 1)) -
           entry(0, 1) * (entry(1, 0) * entry(2, 2) - entry(1, 2) * entry(2, 0)) +
           entry(0, 2) * (entry(1, 0) * entry(2, 1) - entry(1, 1) * entry(2, 0));
  if (m_ == 4) {
    Scalar acc = Scalar::constant(0);
    // Laplace expansion along the first row.
    for (int c = 0; c < 4; ++c) {
      std::vector<Scalar> minor;
      minor.reserve(9);
      for (int r = 1; r < 4; ++r)
        for (int cc = 0; cc < 4; ++cc)
          if (cc != c) minor.push_back(entry(r, cc));
      GroupMap sub(chart_, 3, std::move(minor), Tag::General);
      Scalar term = entry(0, c) * sub.det();
      acc = (c % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
  }
  throw DomainError("determinant supported up to 4x4");
}

GroupMap GroupMap::inverse() const {
  if (tag_ == Tag::SO) return transpose();
  Scalar d = det();
  if (m_ == 1) {
    return GroupMap(chart_, 1, {Scalar::constant(1) / d}, tag_);
  }
  if (m_ == 2) {
    std::vector<Scalar> inv = {entry(1, 1) / d, -entry(0, 1) / d, -entry(1, 0) / d,
                               entry(0, 0) / d};
    return GroupMap(chart_, 2, std::move(inv), tag_);
  }
  if (m_ == 3) {
    std::vector<Scalar> inv(9, Scalar::constant(0));
    auto cof = [&](int r, int c) {
      int r0 = (r + 1) % 3, r1 = (r + 2) % 3, c0 = (c + 1) % 3, c1 = (c + 2) % 3;
      return entry(r0, c0) * entry(r1, c1) - entry(r0, c1) * entry(r1, c0);
    };
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) inv[static_cast<size_t>(c * 3 + r)] = cof(r, c) / d;
    return GroupMap(chart_, 3, std::move(inv), tag_);
  }
  throw DomainError("general matrix inverse supported up to 3x3");
}

GroupMap operator*(const GroupMap& a, const GroupMap& b) {
  merge_charts(a.chart_, b.chart_);
  if (a.m_ != b.m_) throw DomainError("group map size mismatch");
  std::vector<Scalar> mat(static_cast<size_t>(a.m_ * a.m_), Scalar::constant(0));
  for (int r = 0; r < a.m_; ++r)
    for (int c = 0; c < a.m_; ++c) {
      Scalar acc = Scalar::constant(0);
      for (int k = 0; k < a.m_; ++k) acc = acc + a.entry(r, k) * b.entry(k, c);
      mat[static_cast<size_t>(r * a.m_ + c)] = acc;
    }
  GroupMap::Tag tag = (a.tag_ == GroupMap::Tag::SO && b.tag_ == GroupMap::Tag::SO)
                          ? GroupMap::Tag::SO
                          : GroupMap::Tag::General;
  return GroupMap(a.chart_, a.m_, std::move(mat), tag);
}

GroupMap GroupMap::pulled_back(const SmoothMap& f) const {
  if (f.target().get() != chart_.get()) throw DomainError("group map pullback chart mismatch");
  std::vector<Scalar> mat;
  mat.reserve(mat_.size());
  for (const auto& s : mat_) mat.push_back(f.pull_scalar(s));
  return GroupMap(f.source(), m_, std::move(mat), tag_);
}

std::vector<CheckResult> GroupMap::validate(double tol) const {
  std::vector<CheckResult> out;
  auto points = chart_->eval_points();
  double worst_det = 0.0;  // distance of |det| below the invertibility floor
  double det_floor = 1e-6;
  double worst_orth = 0.0, worst_det1 = 0.0;
  Scalar d = det();
  for (const auto& p : points) {
    double dv = d.eval(p);
    worst_det = std::max(worst_det, std::max(0.0, det_floor - std::abs(dv)));
    if (tag_ == Tag::SO) {
      worst_det1 = std::max(worst_det1, std::abs(dv - 1.0));
      for (int r = 0; r < m_; ++r)
        for (int c = 0; c < m_; ++c) {
          double acc = 0;
          for (int k = 0; k < m_; ++k) acc += entry(k, r).eval(p) * entry(k, c).eval(p);
          worst_orth = std::max(worst_orth, std::abs(acc - (r == c ? 1.0 : 0.0)));
        }
    }
  }
  CheckResult inv;
  inv.tag = "group.invertible";
  inv.location = chart_->name();
  inv.residual = worst_det;
  inv.tol = 0.0;
  inv.pass = worst_det <= 0.0;
  out.push_back(inv);
  if (tag_ == Tag::SO) {
    CheckResult orth;
    orth.tag = "group.orthogonal";
    orth.location = chart_->name();
    orth.residual = worst_orth;
    orth.tol = tol;
    orth.pass = worst_orth <= tol;
    out.push_back(orth);
    CheckResult det1;
    det1.tag = "group.special";
    det1.location = chart_->name();
    det1.residual = worst_det1;
    det1.tol = tol;
    det1.pass = worst_det1 <= tol;
    out.push_back(det1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Maurer-Cartan pullback and adjoint
// ---------------------------------------------------------------------------

namespace {

// Gate: matrix-valued quantity must project onto the rep span within tol at samples.
void check_projection_residual(const ChartPtr& chart, const LieAlgebra& alg,
                               const std::vector<Scalar>& mat, const Coeff& coords, double tol,
                               const std::string& what) {
  std::vector<Scalar> back = alg.to_matrix(coords);
  double worst = 0.0;
  for (const auto& p : chart->samples())
    for (size_t e = 0; e < mat.size(); ++e)
      worst = std::max(worst, std::abs(mat[e].eval(p) - back[e].eval(p)));
  if (worst > tol)
    throw ConversionError(what + " does not lie in the algebra span (residual " +
                          std::to_string(worst) + ")");
}

}  // namespace

Form mc_pullback(const GroupMap& g, const LieAlgebra& alg, const Tolerances& tol) {
  if (g.size() != alg.rep_size()) throw ConversionError("group map size != rep size");
  GroupMap ginv = g.inverse();
  int m = g.size();
  Form A = lie_zero_form(g.chart(), 1, alg);
  for (int mu = 0; mu < g.chart()->dim(); ++mu) {
    // (d_mu g) g^{-1}
    std::vector<Scalar> mat(static_cast<size_t>(m * m), Scalar::constant(0));
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) {
        Scalar acc = Scalar::constant(0);
        for (int k = 0; k < m; ++k) acc = acc + g.entry(r, k).partial(mu) * ginv.entry(k, c);
        mat[static_cast<size_t>(r * m + c)] = acc;
      }
    Coeff coords = alg.from_matrix(mat);
    check_projection_residual(g.chart(), alg, mat, coords, tol.projection,
                              "Maurer-Cartan pullback");
    A.add_term({mu}, std::move(coords));
  }
  return A;
}

Coeff adjoint(const GroupMap& g, const LieAlgebra& alg, const Coeff& a, const Tolerances& tol) {
  if (g.size() != alg.rep_size()) throw ConversionError("group map size != rep size");
  int m = g.size();
  GroupMap ginv = g.inverse();
  std::vector<Scalar> mat = alg.to_matrix(a);
  // g * mat * g^{-1}
  std::vector<Scalar> tmp(static_cast<size_t>(m * m), Scalar::constant(0));
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) {
      Scalar acc = Scalar::constant(0);
      for (int k = 0; k < m; ++k) acc = acc + g.entry(r, k) * mat[static_cast<size_t>(k * m + c)];
      tmp[static_cast<size_t>(r * m + c)] = acc;
    }
  std::vector<Scalar> res(static_cast<size_t>(m * m), Scalar::constant(0));
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) {
      Scalar acc = Scalar::constant(0);
      for (int k = 0; k < m; ++k)
        acc = acc + tmp[static_cast<size_t>(r * m + k)] * ginv.entry(k, c);
      res[static_cast<size_t>(r * m + c)] = acc;
    }
  Coeff coords = alg.from_matrix(res);
  check_projection_residual(g.chart(), alg, res, coords, tol.projection, "adjoint action");
  return coords;
}

Form adjoint_form(const GroupMap& g, const LieAlgebra& alg, const Form& omega,
                  const Tolerances& tol) {
  if (omega.space() != CoeffSpace::Lie) throw PairingMismatch("adjoint_form needs Lie coefficients");
  Form out = Form(omega.chart(), omega.degree(), CoeffSpace::Lie, alg.dim());
  for (const auto& [idx, c] : omega.coeffs()) out.add_term(idx, adjoint(g, alg, c, tol));
  return out;
}

Form cartan3(const GroupMap& g, const LieAlgebra& alg, const Tolerances& tol) {
  Form A = mc_pullback(g, alg, tol);
  return wedge_K(A, wedge_bracket(A, A, alg), alg);
}

std::vector<Coeff> polynomial_lie_fields(const ChartPtr& chart, const LieAlgebra& alg) {
  std::vector<Coeff> out;
  for (int k = 0; k < alg.dim(); ++k) {
    Coeff c = alg.zero_element();
    c[static_cast<size_t>(k)] = Scalar::constant(1);
    out.push_back(c);
    Coeff lin = alg.zero_element();
    lin[static_cast<size_t>(k)] = Scalar::coordinate(chart, k % chart->dim());
    out.push_back(lin);
  }
  return out;
}

std::vector<CheckResult> mc_identity_check(const GroupMap& g, const LieAlgebra& alg,
                                           const std::vector<Coeff>& b_fields,
                                           const Tolerances& tol, ExecMode mode) {
  Form A = mc_pullback(g, alg, tol);
  const ChartPtr& chart = g.chart();
  std::vector<Check> checks;

  // Flatness dA - 1/2 [A, A] = 0.
  {
    Form res = A.d() - wedge_bracket(A, A, alg).scaled(Rational(1, 2));
    checks.push_back({"mc.flatness", chart->name(), tol.projection,
                      [res, zero = lie_zero_form(chart, 2, alg), &tol](std::string& w) {
                        auto r = form_identity(res, zero, tol.projection, tol.extra_points,
                                               tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});
  }

  // Bracket compatibility on coordinate fields:
  // d_mu A_nu - d_nu A_mu - [A_mu, A_nu] = 0.
  for (int mu = 0; mu < chart->dim(); ++mu)
    for (int nu = mu + 1; nu < chart->dim(); ++nu) {
      checks.push_back(
          {"mc.bracket-compat",
           chart->name() + ":d" + std::to_string(mu) + ",d" + std::to_string(nu),
           tol.projection, [A, mu, nu, &alg, chart, &tol](std::string& w) {
             Coeff amu = A.coeff_at({mu});
             Coeff anu = A.coeff_at({nu});
             Coeff lhs = alg.zero_element();
             for (int k = 0; k < alg.dim(); ++k)
               lhs[static_cast<size_t>(k)] = anu[static_cast<size_t>(k)].partial(mu) -
                                             amu[static_cast<size_t>(k)].partial(nu);
             Coeff br = alg.bracket(amu, anu);
             for (int k = 0; k < alg.dim(); ++k)
               lhs[static_cast<size_t>(k)] = lhs[static_cast<size_t>(k)] - br[static_cast<size_t>(k)];
             auto r = coeff_identity(chart, lhs, alg.zero_element(), tol.projection,
                                     tol.extra_points, tol.seed);
             w = r.describe();
             return r.worst_residual;
           }});
    }

  // Ad-derivation compatibility: X(Ad_g b) - [A(X), Ad_g b] = Ad_g(X(b)).
  for (size_t bi = 0; bi < b_fields.size(); ++bi) {
    checks.push_back(
        {"mc.adjoint-compat", chart->name() + ":b" + std::to_string(bi), tol.projection,
         [&g, &alg, &b_fields, bi, A, chart, &tol](std::string& w) {
           Coeff adb = adjoint(g, alg, b_fields[bi], tol);
           double worst = 0;
           std::string worst_desc;
           for (int mu = 0; mu < chart->dim(); ++mu) {
             Coeff amu = A.coeff_at({mu});
             Coeff xb = alg.zero_element();
             for (int k = 0; k < alg.dim(); ++k)
               xb[static_cast<size_t>(k)] = b_fields[bi][static_cast<size_t>(k)].partial(mu);
             Coeff rhs = adjoint(g, alg, xb, tol);
             Coeff br = alg.bracket(amu, adb);
             Coeff lhs = alg.zero_element();
             for (int k = 0; k < alg.dim(); ++k)
               lhs[static_cast<size_t>(k)] = adb[static_cast<size_t>(k)].partial(mu) -
                                             br[static_cast<size_t>(k)];
             auto r = coeff_identity(chart, lhs, rhs, tol.projection, tol.extra_points, tol.seed);
             if (r.worst_residual >= worst) {
               worst = r.worst_residual;
               worst_desc = r.describe();
             }
           }
           w = worst_desc;
           return worst;
         }});
  }

  return run_checks(checks, mode);
}

}  // namespace ck
