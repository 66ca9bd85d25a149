#include "courantkit/form.hpp"

#include <algorithm>
#include <cmath>

namespace ck {

// ---------------------------------------------------------------------------
// VecField
// ---------------------------------------------------------------------------

VecField::VecField(ChartPtr chart, std::vector<Scalar> components)
    : chart_(std::move(chart)), components_(std::move(components)) {
  if (static_cast<int>(components_.size()) != chart_->dim())
    throw DomainError("vector field component count != chart dim");
}

VecField VecField::coordinate(const ChartPtr& chart, int i) {
  std::vector<Scalar> comps(static_cast<size_t>(chart->dim()), Scalar::constant(0));
  comps[static_cast<size_t>(i)] = Scalar::constant(1);
  return VecField(chart, std::move(comps));
}

VecField VecField::zero(const ChartPtr& chart) {
  return VecField(chart,
                  std::vector<Scalar>(static_cast<size_t>(chart->dim()), Scalar::constant(0)));
}

Scalar VecField::apply(const Scalar& f) const {
  Scalar acc = Scalar::constant(0);
  for (int mu = 0; mu < chart_->dim(); ++mu)
    acc = acc + components_[static_cast<size_t>(mu)] * f.partial(mu);
  return acc;
}

Coeff VecField::apply(const Coeff& c) const {
  Coeff out;
  out.reserve(c.size());
  for (const auto& comp : c) out.push_back(apply(comp));
  return out;
}

VecField operator+(const VecField& a, const VecField& b) {
  merge_charts(a.chart_, b.chart_);
  std::vector<Scalar> comps;
  comps.reserve(a.components_.size());
  for (size_t i = 0; i < a.components_.size(); ++i)
    comps.push_back(a.components_[i] + b.components_[i]);
  return VecField(a.chart_, std::move(comps));
}

VecField operator-(const VecField& a, const VecField& b) {
  merge_charts(a.chart_, b.chart_);
  std::vector<Scalar> comps;
  comps.reserve(a.components_.size());
  for (size_t i = 0; i < a.components_.size(); ++i)
    comps.push_back(a.components_[i] - b.components_[i]);
  return VecField(a.chart_, std::move(comps));
}

VecField VecField::scaled(const Scalar& f) const {
  std::vector<Scalar> comps;
  comps.reserve(components_.size());
  for (const auto& c : components_) comps.push_back(c * f);
  return VecField(chart_, std::move(comps));
}

VecField vf_bracket(const VecField& X, const VecField& Y) {
  merge_charts(X.chart(), Y.chart());
  std::vector<Scalar> comps;
  comps.reserve(X.components().size());
  for (int mu = 0; mu < X.chart()->dim(); ++mu)
    comps.push_back(X.apply(Y.component(mu)) - Y.apply(X.component(mu)));
  return VecField(X.chart(), std::move(comps));
}

// ---------------------------------------------------------------------------
// SmoothMap
// ---------------------------------------------------------------------------

SmoothMap::SmoothMap(ChartPtr source, ChartPtr target, std::vector<Scalar> components)
    : source_(std::move(source)), target_(std::move(target)), components_(std::move(components)) {
  if (static_cast<int>(components_.size()) != target_->dim())
    throw DomainError("smooth map component count != target dim");
  for (const auto& c : components_)
    if (c.chart() && c.chart().get() != source_.get())
      throw DomainError("smooth map components must live on the source chart");
}

SmoothMap SmoothMap::identity(const ChartPtr& chart) {
  std::vector<Scalar> comps;
  for (int i = 0; i < chart->dim(); ++i) comps.push_back(Scalar::coordinate(chart, i));
  return SmoothMap(chart, chart, std::move(comps));
}

std::vector<double> SmoothMap::eval(std::span<const double> point) const {
  std::vector<double> out;
  out.reserve(components_.size());
  for (const auto& c : components_) out.push_back(c.eval(point));
  return out;
}

Scalar SmoothMap::pull_scalar(const Scalar& f) const {
  if (f.chart() && f.chart().get() != target_.get())
    throw DomainError("pullback: scalar not on the map's target chart");
  std::vector<Expr> repl;
  repl.reserve(components_.size());
  for (const auto& c : components_) repl.push_back(c.expr());
  return Scalar(source_, f.expr().substitute(repl));
}

SmoothMap SmoothMap::compose_after(const SmoothMap& g) const {
  if (g.target().get() != source_.get())
    throw DomainError("smooth map composition: chart mismatch");
  std::vector<Scalar> comps;
  comps.reserve(components_.size());
  for (const auto& c : components_) comps.push_back(g.pull_scalar(Scalar(source_, c.expr())));
  return SmoothMap(g.source(), target_, std::move(comps));
}

// ---------------------------------------------------------------------------
// Form
// ---------------------------------------------------------------------------

namespace {

bool coeff_is_zero(const Coeff& c) {
  for (const auto& s : c)
    if (!s.is_zero()) return false;
  return true;
}

Coeff zero_coeff(int len) { return Coeff(static_cast<size_t>(len), Scalar::constant(0)); }

Coeff coeff_add(const Coeff& a, const Coeff& b) {
  Coeff out;
  out.reserve(a.size());
  for (size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
  return out;
}

Coeff coeff_scale(const Coeff& a, const Scalar& f) {
  Coeff out;
  out.reserve(a.size());
  for (const auto& s : a) out.push_back(s * f);
  return out;
}

// Sorts idx in place; returns parity sign, or 0 when indices repeat.
int sort_index(MultiIndex& idx) {
  int sign = 1;
  for (size_t i = 1; i < idx.size(); ++i)
    for (size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  return sign;
}

}  // namespace

Form::Form(ChartPtr chart, int degree, CoeffSpace space, int coeff_len)
    : chart_(std::move(chart)), degree_(degree), space_(space), coeff_len_(coeff_len) {
  if (degree_ < 0) throw DomainError("negative form degree");
}

void Form::add_term(MultiIndex idx, Coeff c) {
  if (static_cast<int>(idx.size()) != degree_) throw DomainError("multi-index length != degree");
  if (static_cast<int>(c.size()) != coeff_len_) throw DomainError("coefficient length mismatch");
  if (degree_ > chart_->dim()) return;  // forms above chart dimension vanish
  for (int i : idx)
    if (i < 0 || i >= chart_->dim()) throw DomainError("multi-index out of chart range");
  int sign = sort_index(idx);
  if (sign == 0) return;
  if (sign < 0)
    for (auto& s : c) s = -s;
  auto it = coeffs_.find(idx);
  if (it == coeffs_.end()) {
    if (!coeff_is_zero(c)) coeffs_.emplace(std::move(idx), std::move(c));
  } else {
    it->second = coeff_add(it->second, c);
    if (coeff_is_zero(it->second)) coeffs_.erase(it);
  }
}

Coeff Form::coeff_at(const MultiIndex& idx) const {
  auto it = coeffs_.find(idx);
  if (it != coeffs_.end()) return it->second;
  return zero_coeff(coeff_len_);
}

Form operator+(const Form& a, const Form& b) {
  merge_charts(a.chart(), b.chart());
  if (a.degree() != b.degree() || a.space() != b.space() || a.coeff_len() != b.coeff_len())
    throw PairingMismatch("form addition shape mismatch");
  Form out = a;
  for (const auto& [idx, c] : b.coeffs()) out.add_term(idx, c);
  return out;
}

Form operator-(const Form& a, const Form& b) { return a + (-b); }

Form operator-(const Form& a) {
  Form out(a.chart(), a.degree(), a.space(), a.coeff_len());
  for (const auto& [idx, c] : a.coeffs()) {
    Coeff nc;
    nc.reserve(c.size());
    for (const auto& s : c) nc.push_back(-s);
    out.add_term(idx, std::move(nc));
  }
  return out;
}

Form Form::scaled(const Scalar& f) const {
  Form out(chart_, degree_, space_, coeff_len_);
  for (const auto& [idx, c] : coeffs_) out.add_term(idx, coeff_scale(c, f));
  return out;
}

Form Form::scaled(Rational r) const { return scaled(Scalar::constant(r)); }

Form Form::d() const {
  Form out(chart_, degree_ + 1, space_, coeff_len_);
  for (const auto& [idx, c] : coeffs_) {
    for (int mu = 0; mu < chart_->dim(); ++mu) {
      if (std::find(idx.begin(), idx.end(), mu) != idx.end()) continue;
      Coeff dc;
      dc.reserve(c.size());
      for (const auto& s : c) dc.push_back(s.partial(mu));
      MultiIndex nidx;
      nidx.reserve(idx.size() + 1);
      nidx.push_back(mu);
      nidx.insert(nidx.end(), idx.begin(), idx.end());
      out.add_term(std::move(nidx), std::move(dc));
    }
  }
  return out;
}

Form Form::interior(const VecField& X) const {
  merge_charts(chart_, X.chart());
  if (degree_ == 0) throw DomainError("interior product needs degree >= 1");
  Form out(chart_, degree_ - 1, space_, coeff_len_);
  for (const auto& [idx, c] : coeffs_) {
    for (size_t r = 0; r < idx.size(); ++r) {
      Scalar factor = X.component(idx[r]);
      if (r % 2 == 1) factor = -factor;
      MultiIndex nidx;
      nidx.reserve(idx.size() - 1);
      for (size_t s = 0; s < idx.size(); ++s)
        if (s != r) nidx.push_back(idx[s]);
      out.add_term(std::move(nidx), coeff_scale(c, factor));
    }
  }
  return out;
}

Form Form::lie_derivative(const VecField& X) const {
  if (degree_ == 0) {
    Form out(chart_, 0, space_, coeff_len_);
    out.add_term({}, X.apply(coeff_at({})));
    return out;
  }
  return interior(X).d() + d().interior(X);
}

Coeff Form::eval_on(std::span<const VecField> fields) const {
  if (static_cast<int>(fields.size()) != degree_)
    throw DomainError("eval_on: field count != degree");
  Coeff acc = zero_coeff(coeff_len_);
  if (degree_ == 0) return coeff_at({});
  // Antisymmetrized sum: for each stored index I, coeff * det[ X_s^{i_r} ].
  std::vector<int> perm(static_cast<size_t>(degree_));
  for (const auto& [idx, c] : coeffs_) {
    // permanent-style expansion of the determinant over S_k (k <= 4 in practice)
    std::vector<size_t> p(perm.size());
    for (size_t i = 0; i < p.size(); ++i) p[i] = i;
    do {
      int sign = 1;
      for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = i + 1; j < p.size(); ++j)
          if (p[i] > p[j]) sign = -sign;
      Scalar prod = Scalar::constant(sign);
      for (size_t r = 0; r < p.size(); ++r) prod = prod * fields[p[r]].component(idx[r]);
      acc = coeff_add(acc, coeff_scale(c, prod));
    } while (std::next_permutation(p.begin(), p.end()));
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Wedge and pullback
// ---------------------------------------------------------------------------

namespace {

// Sign of merging two increasing index sets (count of out-of-order pairs).
int merge_sign(const MultiIndex& a, const MultiIndex& b) {
  int inv = 0;
  for (int i : a)
    for (int j : b)
      if (i > j) ++inv;
  return (inv % 2 == 0) ? 1 : -1;
}

bool disjoint(const MultiIndex& a, const MultiIndex& b) {
  for (int i : a)
    if (std::find(b.begin(), b.end(), i) != b.end()) return false;
  return true;
}

}  // namespace

Form wedge_with(const Form& a, const Form& b, CoeffSpace out_space, int out_len,
                const CoeffCombiner& combine) {
  merge_charts(a.chart(), b.chart());
  Form out(a.chart(), a.degree() + b.degree(), out_space, out_len);
  for (const auto& [ia, ca] : a.coeffs()) {
    for (const auto& [ib, cb] : b.coeffs()) {
      if (!disjoint(ia, ib)) continue;
      int sign = merge_sign(ia, ib);
      MultiIndex merged;
      merged.reserve(ia.size() + ib.size());
      merged.insert(merged.end(), ia.begin(), ia.end());
      merged.insert(merged.end(), ib.begin(), ib.end());
      std::sort(merged.begin(), merged.end());
      Coeff c = combine(ca, cb);
      if (sign < 0)
        for (auto& s : c) s = -s;
      out.add_term(std::move(merged), std::move(c));
    }
  }
  return out;
}

Form wedge(const Form& a, const Form& b) {
  if (a.space() != CoeffSpace::Scalar || b.space() != CoeffSpace::Scalar)
    throw PairingMismatch("scalar wedge needs scalar coefficients");
  return wedge_with(a, b, CoeffSpace::Scalar, 1,
                    [](const Coeff& x, const Coeff& y) { return Coeff{x[0] * y[0]}; });
}

Form wedge_scale(const Form& scalar_form, const Form& vector_form) {
  if (scalar_form.space() != CoeffSpace::Scalar)
    throw PairingMismatch("wedge_scale: first operand must be scalar-valued");
  return wedge_with(scalar_form, vector_form, vector_form.space(), vector_form.coeff_len(),
                    [](const Coeff& x, const Coeff& y) { return coeff_scale(y, x[0]); });
}

Form wedge_matrix(const Form& a, const Form& b) {
  if (a.space() != CoeffSpace::Matrix || b.space() != CoeffSpace::Matrix ||
      a.coeff_len() != b.coeff_len())
    throw PairingMismatch("matrix wedge needs matching matrix coefficients");
  int mm = a.coeff_len();
  int m = 0;
  while (m * m < mm) ++m;
  if (m * m != mm) throw PairingMismatch("matrix coefficient length is not a square");
  return wedge_with(a, b, CoeffSpace::Matrix, mm, [m](const Coeff& x, const Coeff& y) {
    Coeff out(static_cast<size_t>(m * m), Scalar::constant(0));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Scalar acc = Scalar::constant(0);
        for (int k = 0; k < m; ++k)
          acc = acc + x[static_cast<size_t>(i * m + k)] * y[static_cast<size_t>(k * m + j)];
        out[static_cast<size_t>(i * m + j)] = acc;
      }
    return out;
  });
}

Form pullback(const SmoothMap& f, const Form& alpha) {
  if (alpha.chart().get() != f.target().get())
    throw DomainError("pullback: form not on the map's target chart");
  Form out(f.source(), alpha.degree(), alpha.space(), alpha.coeff_len());
  // d(f^i) as 1-forms on the source chart
  std::vector<Form> df;
  df.reserve(f.components().size());
  for (const auto& comp : f.components()) {
    Form one(f.source(), 1, CoeffSpace::Scalar, 1);
    for (int mu = 0; mu < f.source()->dim(); ++mu) one.add_term({mu}, {comp.partial(mu)});
    df.push_back(std::move(one));
  }
  for (const auto& [idx, c] : alpha.coeffs()) {
    Coeff pulled;
    pulled.reserve(c.size());
    for (const auto& s : c) pulled.push_back(f.pull_scalar(s));
    Form factor(f.source(), 0, CoeffSpace::Scalar, 1);
    factor.add_term({}, {Scalar::constant(1)});
    for (int i : idx) factor = wedge(factor, df[static_cast<size_t>(i)]);
    // scale the scalar k-form by the pulled coefficient vector
    for (const auto& [fidx, fc] : factor.coeffs()) out.add_term(fidx, coeff_scale(pulled, fc[0]));
  }
  return out;
}

IdentityReport coeff_identity(const ChartPtr& chart, const Coeff& a, const Coeff& b, double tol,
                              int extra_points, uint64_t seed) {
  IdentityReport worst;
  worst.pass = true;
  if (a.size() != b.size()) throw PairingMismatch("coefficient comparison length mismatch");
  if (a.empty()) {
    worst.points_checked = 0;
    return worst;
  }
  for (size_t i = 0; i < a.size(); ++i) {
    Scalar sa = a[i].chart() ? a[i] : Scalar(chart, a[i].expr());
    Scalar sb = b[i].chart() ? b[i] : Scalar(chart, b[i].expr());
    IdentityReport r = identical_on_samples(sa, sb, tol, extra_points, seed);
    if (r.worst_residual >= worst.worst_residual) {
      bool keep_pass = worst.pass;
      worst = r;
      worst.pass = keep_pass && r.pass;
    } else if (!r.pass) {
      worst.pass = false;
    }
  }
  return worst;
}

IdentityReport form_identity(const Form& a, const Form& b, double tol, int extra_points,
                             uint64_t seed) {
  merge_charts(a.chart(), b.chart());
  if (a.degree() != b.degree() || a.coeff_len() != b.coeff_len())
    throw PairingMismatch("form comparison shape mismatch");
  IdentityReport worst;
  worst.pass = true;
  std::vector<MultiIndex> indices;
  for (const auto& [idx, c] : a.coeffs()) indices.push_back(idx);
  for (const auto& [idx, c] : b.coeffs())
    if (std::find(indices.begin(), indices.end(), idx) == indices.end()) indices.push_back(idx);
  for (const auto& idx : indices) {
    IdentityReport r =
        coeff_identity(a.chart(), a.coeff_at(idx), b.coeff_at(idx), tol, extra_points, seed);
    if (r.worst_residual >= worst.worst_residual) {
      bool keep_pass = worst.pass;
      worst = r;
      worst.pass = keep_pass && r.pass;
    } else if (!r.pass) {
      worst.pass = false;
    }
  }
  return worst;
}


IdentityReport form_vanishes(const Form& a, double tol, int extra_points, uint64_t seed) {
  return form_identity(a, Form(a.chart(), a.degree(), a.space(), a.coeff_len()), tol,
                       extra_points, seed);
}

}  // namespace ck
