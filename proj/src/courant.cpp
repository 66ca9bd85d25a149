#include "courantkit/courant.hpp"

#include <array>
#include <cmath>

namespace ck {

namespace {

Coeff cadd(const Coeff& a, const Coeff& b) {
  Coeff out;
  out.reserve(a.size());
  for (size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
  return out;
}
Coeff csub(const Coeff& a, const Coeff& b) {
  Coeff out;
  out.reserve(a.size());
  for (size_t i = 0; i < a.size(); ++i) out.push_back(a[i] - b[i]);
  return out;
}

Form one_form_from(const ChartPtr& chart, const std::vector<Scalar>& comps) {
  Form f = Form::scalar_zero(chart, 1);
  for (size_t nu = 0; nu < comps.size(); ++nu) f.add_term({static_cast<int>(nu)}, {comps[nu]});
  return f;
}

Coeff contract1(const Form& lie_one_form, const VecField& X) {
  std::vector<VecField> v{X};
  return lie_one_form.eval_on(v);
}

Scalar zero_on(const ChartPtr& chart) { return Scalar(chart, Expr()); }

}  // namespace

// ---------------------------------------------------------------------------
// Sections and brackets
// ---------------------------------------------------------------------------

Section Section::zero(const ChartPtr& chart, const LieAlgebra& alg) {
  return Section{VecField::zero(chart), alg.zero_element(), Form::scalar_zero(chart, 1)};
}

Section operator+(const Section& a, const Section& b) {
  return Section{a.X + b.X, cadd(a.a, b.a), a.xi + b.xi};
}
Section operator-(const Section& a, const Section& b) {
  return Section{a.X - b.X, csub(a.a, b.a), a.xi - b.xi};
}

CourantParams CourantParams::standard(const ChartPtr& chart, AlgPtr alg) {
  Form theta = lie_zero_form(chart, 1, *alg);
  Form R = lie_zero_form(chart, 2, *alg);
  Form H = Form::scalar_zero(chart, 3);
  return CourantParams{std::move(alg), std::move(theta), std::move(R), std::move(H)};
}

Coeff CourantParams::theta_of(const VecField& X) const { return contract1(theta, X); }

Coeff CourantParams::nabla(const VecField& X, const Coeff& a) const {
  return cadd(X.apply(a), alg->bracket(theta_of(X), a));
}

std::vector<CheckResult> CourantParams::validate(const Tolerances& tol) const {
  std::vector<Check> checks;
  const ChartPtr& chart = theta.chart();
  checks.push_back({"courant-params.curvature-contract", chart->name(), tol.projection,
                    [this, &tol](std::string& w) {
                      auto r = form_identity(R, curvature_form(theta, *alg), tol.projection,
                                             tol.extra_points, tol.seed);
                      w = r.describe();
                      return r.worst_residual;
                    }});
  checks.push_back({"courant-params.bianchi", chart->name(), tol.projection,
                    [this, &tol](std::string& w) {
                      auto r = form_identity(H.d(), wedge_K(R, R, *alg), tol.projection,
                                             tol.extra_points, tol.seed);
                      w = r.describe();
                      return r.worst_residual;
                    }});
  return run_checks(checks, ExecMode::Serial);
}

Scalar pairing(const LieAlgebra& alg, const Section& e1, const Section& e2) {
  std::vector<VecField> v2{e2.X}, v1{e1.X};
  Scalar cross = e1.xi.eval_on(v2)[0] + e2.xi.eval_on(v1)[0];
  return cross * Scalar::constant(Rational(1, 2)) + alg.pairing(e1.a, e2.a);
}

Section bracket_standard(const LieAlgebra& alg, const Section& e1, const Section& e2) {
  const ChartPtr& chart = e1.X.chart();
  VecField X3 = vf_bracket(e1.X, e2.X);
  Coeff a3 = cadd(csub(e1.X.apply(e2.a), e2.X.apply(e1.a)), alg.bracket(e1.a, e2.a));
  // P0(a,b)(Z) = 2 (b, Z(a))^K
  std::vector<Scalar> p0(static_cast<size_t>(chart->dim()), Scalar::constant(0));
  for (int nu = 0; nu < chart->dim(); ++nu) {
    Coeff da = alg.zero_element();
    for (int k = 0; k < alg.dim(); ++k)
      da[static_cast<size_t>(k)] = e1.a[static_cast<size_t>(k)].partial(nu);
    p0[static_cast<size_t>(nu)] = Scalar::constant(2) * alg.pairing(e2.a, da);
  }
  Form xi3 = e2.xi.lie_derivative(e1.X) - e1.xi.d().interior(e2.X) + one_form_from(chart, p0);
  return Section{std::move(X3), std::move(a3), std::move(xi3)};
}

Section bracket_general(const CourantParams& p, const Section& e1, const Section& e2) {
  const LieAlgebra& alg = *p.alg;
  const ChartPtr& chart = e1.X.chart();
  VecField X3 = vf_bracket(e1.X, e2.X);

  std::vector<VecField> v12{e1.X, e2.X};
  Coeff a3 = cadd(
      cadd(csub(p.nabla(e1.X, e2.a), p.nabla(e2.X, e1.a)), alg.bracket(e1.a, e2.a)),
      p.R.eval_on(v12));

  // P(a,b)(Z) = 2 (b, grad_Z a)^K
  std::vector<Scalar> pf(static_cast<size_t>(chart->dim()), Scalar::constant(0));
  for (int nu = 0; nu < chart->dim(); ++nu) {
    VecField Z = VecField::coordinate(chart, nu);
    pf[static_cast<size_t>(nu)] = Scalar::constant(2) * alg.pairing(e2.a, p.nabla(Z, e1.a));
  }
  // Q(X,a) = (a, R(X, .))^K as a 1-form
  auto q_form = [&](const VecField& X, const Coeff& a) {
    Form iXR = p.R.interior(X);
    std::vector<Scalar> q(static_cast<size_t>(chart->dim()), Scalar::constant(0));
    for (int nu = 0; nu < chart->dim(); ++nu)
      q[static_cast<size_t>(nu)] = alg.pairing(a, iXR.coeff_at({nu}));
    return one_form_from(chart, q);
  };
  Form xi3 = e2.xi.lie_derivative(e1.X) - e1.xi.d().interior(e2.X) + one_form_from(chart, pf) -
             q_form(e1.X, e2.a).scaled(Rational::integer(2)) +
             q_form(e2.X, e1.a).scaled(Rational::integer(2)) +
             p.H.interior(e1.X).interior(e2.X);
  return Section{std::move(X3), std::move(a3), std::move(xi3)};
}

// ---------------------------------------------------------------------------
// Axiom sweep
// ---------------------------------------------------------------------------

std::vector<Section> generate_test_sections(const ChartPtr& chart, const LieAlgebra& alg,
                                            uint64_t seed) {
  SplitMix64 rng(seed ^ 0x5ec71015u);
  const int dim = chart->dim();
  std::vector<Scalar> monomials = {Scalar::constant(1)};
  for (int i = 0; i < dim; ++i) monomials.push_back(Scalar::coordinate(chart, i));
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j)
      monomials.push_back(Scalar::coordinate(chart, i) * Scalar::coordinate(chart, j));

  auto pick = [&]() { return monomials[rng.next() % monomials.size()]; };

  std::vector<Section> out;
  for (int mu = 0; mu < dim; ++mu) {
    Section s = Section::zero(chart, alg);
    s.X = VecField::coordinate(chart, mu).scaled(pick());
    out.push_back(std::move(s));
  }
  for (int k = 0; k < alg.dim(); ++k) {
    Section s = Section::zero(chart, alg);
    s.a[static_cast<size_t>(k)] = pick();
    out.push_back(std::move(s));
  }
  for (int mu = 0; mu < dim; ++mu) {
    Section s = Section::zero(chart, alg);
    Form xi = Form::scalar_zero(chart, 1);
    xi.add_term({mu}, {pick()});
    s.xi = std::move(xi);
    out.push_back(std::move(s));
  }
  // two dense sections exercising every slot at once
  for (int rep = 0; rep < 2; ++rep) {
    Section s = Section::zero(chart, alg);
    std::vector<Scalar> comps;
    for (int mu = 0; mu < dim; ++mu) comps.push_back(pick());
    s.X = VecField(chart, comps);
    for (int k = 0; k < alg.dim(); ++k) s.a[static_cast<size_t>(k)] = pick();
    Form xi = Form::scalar_zero(chart, 1);
    for (int mu = 0; mu < dim; ++mu) xi.add_term({mu}, {pick()});
    s.xi = std::move(xi);
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

IdentityReport section_identity(const Section& a, const Section& b, double tol,
                                const Tolerances& t) {
  const ChartPtr& chart = a.X.chart();
  IdentityReport worst;
  worst.pass = true;
  auto merge = [&](const IdentityReport& r) {
    if (r.worst_residual >= worst.worst_residual) {
      bool keep = worst.pass;
      worst = r;
      worst.pass = keep && r.pass;
    } else if (!r.pass) {
      worst.pass = false;
    }
  };
  merge(coeff_identity(chart, a.X.components(), b.X.components(), tol, t.extra_points, t.seed));
  merge(coeff_identity(chart, a.a, b.a, tol, t.extra_points, t.seed));
  merge(form_identity(a.xi, b.xi, tol, t.extra_points, t.seed));
  return worst;
}

}  // namespace

std::vector<CheckResult> check_courant_axioms(const LieAlgebra& alg, const BracketFn& bracket,
                                              const std::vector<Section>& sections,
                                              int triple_count, const Tolerances& tol,
                                              ExecMode mode) {
  if (sections.empty()) return {};
  const ChartPtr& chart = sections.front().X.chart();
  SplitMix64 rng(tol.seed ^ 0xa7105e3u);
  std::vector<std::array<size_t, 3>> triples;
  for (int t = 0; t < triple_count; ++t)
    triples.push_back({rng.next() % sections.size(), rng.next() % sections.size(),
                       rng.next() % sections.size()});

  std::vector<Check> checks;
  for (size_t ti = 0; ti < triples.size(); ++ti) {
    auto [i1, i2, i3] = triples[ti];
    std::string loc = chart->name() + ":triple" + std::to_string(ti);

    checks.push_back({"courant.leibniz", loc, tol.projection,
                      [&sections, &bracket, i1, i2, i3, &tol](std::string& w) {
                        const Section &e1 = sections[i1], &e2 = sections[i2], &e3 = sections[i3];
                        Section lhs = bracket(e1, bracket(e2, e3));
                        Section rhs = bracket(bracket(e1, e2), e3) + bracket(e2, bracket(e1, e3));
                        auto r = section_identity(lhs, rhs, tol.projection, tol);
                        w = r.describe();
                        return r.worst_residual;
                      }});

    checks.push_back({"courant.self-pairing", loc, tol.projection,
                      [&sections, &alg, &bracket, i1, i2, &tol](std::string& w) {
                        const Section &e = sections[i1], &f = sections[i2];
                        Scalar lhs = pairing(alg, bracket(e, e), f);
                        Scalar rhs =
                            f.X.apply(pairing(alg, e, e)) * Scalar::constant(Rational(1, 2));
                        auto r = identical_on_samples(lhs, rhs, tol.projection, tol.extra_points,
                                                      tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});

    checks.push_back({"courant.invariance", loc, tol.projection,
                      [&sections, &alg, &bracket, i1, i2, i3, &tol](std::string& w) {
                        const Section &e1 = sections[i1], &e2 = sections[i2], &e3 = sections[i3];
                        Scalar lhs = e1.X.apply(pairing(alg, e2, e3));
                        Scalar rhs = pairing(alg, bracket(e1, e2), e3) +
                                     pairing(alg, e2, bracket(e1, e3));
                        auto r = identical_on_samples(lhs, rhs, tol.projection, tol.extra_points,
                                                      tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});
  }
  return run_checks(checks, mode);
}

// ---------------------------------------------------------------------------
// TauField
// ---------------------------------------------------------------------------

TauField TauField::ad(GroupMap g) {
  TauField t;
  t.chart_ = g.chart();
  t.g_ = std::move(g);
  return t;
}

TauField TauField::explicit_matrix(ChartPtr chart, int dim, std::vector<Scalar> matrix) {
  if (static_cast<int>(matrix.size()) != dim * dim)
    throw SchemaError("explicit tau matrix size mismatch");
  TauField t;
  t.chart_ = std::move(chart);
  t.dim_ = dim;
  t.matrix_ = std::move(matrix);
  return t;
}

TauField TauField::identity(const ChartPtr& chart) {
  // rep-size-1 identity acts as a pass-through for any algebra
  return ad(GroupMap::identity(chart, 1));
}

const GroupMap& TauField::group() const {
  if (!g_) throw DomainError("tau field is not of adjoint type");
  return *g_;
}

Coeff TauField::apply(const LieAlgebra& alg, const Coeff& a) const {
  if (g_) {
    if (g_->size() == 1 && alg.rep_size() != 1) return a;  // identity placeholder
    return adjoint(*g_, alg, a);
  }
  Coeff out = alg.zero_element();
  for (int i = 0; i < dim_; ++i) {
    Scalar acc = Scalar::constant(0);
    for (int j = 0; j < dim_; ++j)
      acc = acc + matrix_[static_cast<size_t>(i * dim_ + j)] * a[static_cast<size_t>(j)];
    out[static_cast<size_t>(i)] = acc;
  }
  return out;
}

Form TauField::apply_form(const LieAlgebra& alg, const Form& omega) const {
  Form out(omega.chart(), omega.degree(), CoeffSpace::Lie, alg.dim());
  for (const auto& [idx, c] : omega.coeffs()) out.add_term(idx, apply(alg, c));
  return out;
}

TauField TauField::inverse() const {
  if (g_) return ad(g_->inverse());
  throw DomainError("inverse of an explicit tau field is not supported");
}

TauField TauField::compose(const LieAlgebra& alg, const TauField& other) const {
  if (g_ && other.g_) {
    if (g_->size() == 1 && alg.rep_size() != 1) return other;
    if (other.g_->size() == 1 && alg.rep_size() != 1) return *this;
    return ad(*g_ * *other.g_);
  }
  int d = alg.dim();
  std::vector<Scalar> m(static_cast<size_t>(d * d), Scalar::constant(0));
  for (int j = 0; j < d; ++j) {
    Coeff col = apply(alg, other.apply(alg, alg.basis_element(j)));
    for (int i = 0; i < d; ++i) m[static_cast<size_t>(i * d + j)] = col[static_cast<size_t>(i)];
  }
  return explicit_matrix(chart_, d, std::move(m));
}

TauField TauField::pulled_back(const SmoothMap& f) const {
  if (g_) return ad(g_->pulled_back(f));
  std::vector<Scalar> m;
  m.reserve(matrix_.size());
  for (const auto& s : matrix_) m.push_back(f.pull_scalar(s));
  return explicit_matrix(f.source(), dim_, std::move(m));
}

std::vector<CheckResult> TauField::validate(const LieAlgebra& alg, const Tolerances& tol) const {
  std::vector<Check> checks;
  const ChartPtr chart = chart_;
  for (int i = 0; i < alg.dim(); ++i)
    for (int j = i; j < alg.dim(); ++j) {
      checks.push_back({"tau.orthogonal", chart->name(), tol.projection,
                        [this, &alg, i, j, chart, &tol](std::string& w) {
                          Coeff ti = apply(alg, alg.basis_element(i));
                          Coeff tj = apply(alg, alg.basis_element(j));
                          Scalar lhs = alg.pairing(ti, tj);
                          Scalar rhs = alg.pairing(alg.basis_element(i), alg.basis_element(j));
                          auto r = identical_on_samples(Scalar(chart, lhs.expr()),
                                                        Scalar(chart, rhs.expr()), tol.projection,
                                                        tol.extra_points, tol.seed);
                          w = r.describe();
                          return r.worst_residual;
                        }});
      checks.push_back({"tau.bracket-auto", chart->name(), tol.projection,
                        [this, &alg, i, j, chart, &tol](std::string& w) {
                          Coeff ti = apply(alg, alg.basis_element(i));
                          Coeff tj = apply(alg, alg.basis_element(j));
                          Coeff lhs = alg.bracket(ti, tj);
                          Coeff rhs = apply(
                              alg, alg.bracket(alg.basis_element(i), alg.basis_element(j)));
                          auto r = coeff_identity(chart, lhs, rhs, tol.projection,
                                                  tol.extra_points, tol.seed);
                          w = r.describe();
                          return r.worst_residual;
                        }});
    }
  return run_checks(checks, ExecMode::Serial);
}

// ---------------------------------------------------------------------------
// CourantAuto
// ---------------------------------------------------------------------------

CourantAuto CourantAuto::identity(const ChartPtr& chart, const LieAlgebra& alg) {
  CourantAuto L{lie_zero_form(chart, 1, alg),
                TauField::ad(GroupMap::identity(chart, alg.rep_size())),
                {}};
  L.beta.assign(static_cast<size_t>(chart->dim()),
                std::vector<Scalar>(static_cast<size_t>(chart->dim()), Scalar::constant(0)));
  return L;
}

Form CourantAuto::beta_of(const VecField& X) const {
  const ChartPtr& ch = chart();
  std::vector<Scalar> comps(static_cast<size_t>(ch->dim()), Scalar::constant(0));
  for (int nu = 0; nu < ch->dim(); ++nu) {
    Scalar acc = Scalar::constant(0);
    for (int mu = 0; mu < ch->dim(); ++mu)
      acc = acc + beta[static_cast<size_t>(mu)][static_cast<size_t>(nu)] * X.component(mu);
    comps[static_cast<size_t>(nu)] = acc;
  }
  return one_form_from(ch, comps);
}

Form CourantAuto::beta_two_form() const {
  const ChartPtr& ch = chart();
  Form out = Form::scalar_zero(ch, 2);
  for (int mu = 0; mu < ch->dim(); ++mu)
    for (int nu = mu + 1; nu < ch->dim(); ++nu) {
      Scalar anti = (beta[static_cast<size_t>(mu)][static_cast<size_t>(nu)] -
                     beta[static_cast<size_t>(nu)][static_cast<size_t>(mu)]) *
                    Scalar::constant(Rational(1, 2));
      out.add_term({mu, nu}, {anti});
    }
  return out;
}

std::vector<std::vector<Scalar>> CourantAuto::beta_sym() const {
  const ChartPtr& ch = chart();
  std::vector<std::vector<Scalar>> out(
      static_cast<size_t>(ch->dim()),
      std::vector<Scalar>(static_cast<size_t>(ch->dim()), Scalar::constant(0)));
  for (int mu = 0; mu < ch->dim(); ++mu)
    for (int nu = 0; nu < ch->dim(); ++nu)
      out[static_cast<size_t>(mu)][static_cast<size_t>(nu)] =
          (beta[static_cast<size_t>(mu)][static_cast<size_t>(nu)] +
           beta[static_cast<size_t>(nu)][static_cast<size_t>(mu)]) *
          Scalar::constant(Rational(1, 2));
  return out;
}

CourantAuto CourantAuto::pulled_back(const SmoothMap& f, const LieAlgebra& alg) const {
  (void)alg;
  CourantAuto out{pullback(f, phi), tau.pulled_back(f), {}};
  const ChartPtr& src = f.source();
  const ChartPtr& tgt = f.target();
  out.beta.assign(static_cast<size_t>(src->dim()),
                  std::vector<Scalar>(static_cast<size_t>(src->dim()), Scalar::constant(0)));
  for (int a = 0; a < src->dim(); ++a)
    for (int b = 0; b < src->dim(); ++b) {
      Scalar acc = Scalar::constant(0);
      for (int mu = 0; mu < tgt->dim(); ++mu)
        for (int nu = 0; nu < tgt->dim(); ++nu)
          acc = acc + f.components()[static_cast<size_t>(mu)].partial(a) *
                          f.components()[static_cast<size_t>(nu)].partial(b) *
                          f.pull_scalar(beta[static_cast<size_t>(mu)][static_cast<size_t>(nu)]);
      out.beta[static_cast<size_t>(a)][static_cast<size_t>(b)] = acc;
    }
  return out;
}

Section auto_apply(const LieAlgebra& alg, const CourantAuto& L, const Section& e) {
  Coeff ta = L.tau.apply(alg, e.a);
  Coeff a2 = cadd(contract1(L.phi, e.X), ta);
  const ChartPtr& chart = e.X.chart();
  std::vector<Scalar> starred(static_cast<size_t>(chart->dim()), Scalar::constant(0));
  for (int nu = 0; nu < chart->dim(); ++nu)
    starred[static_cast<size_t>(nu)] = Scalar::constant(-2) * alg.pairing(ta, L.phi.coeff_at({nu}));
  Form xi2 = L.beta_of(e.X) + one_form_from(chart, starred) + e.xi;
  return Section{e.X, std::move(a2), std::move(xi2)};
}

std::vector<CheckResult> auto_validate(const LieAlgebra& alg, const CourantAuto& L,
                                       const Tolerances& tol, ExecMode mode, int pair_count) {
  const ChartPtr& chart = L.chart();
  const int dim = chart->dim();
  std::vector<Check> checks;

  checks.push_back({"auto.symmetric-part", chart->name(), tol.projection,
                    [&alg, &L, dim, chart, &tol](std::string& w) {
                      double worst = 0;
                      std::string desc;
                      for (int mu = 0; mu < dim; ++mu)
                        for (int nu = 0; nu < dim; ++nu) {
                          Scalar lhs =
                              (L.beta[static_cast<size_t>(mu)][static_cast<size_t>(nu)] +
                               L.beta[static_cast<size_t>(nu)][static_cast<size_t>(mu)]) *
                                  Scalar::constant(Rational(1, 2)) +
                              alg.pairing(L.phi.coeff_at({mu}), L.phi.coeff_at({nu}));
                          auto r = identical_on_samples(Scalar(chart, lhs.expr()), zero_on(chart),
                                                        tol.projection, tol.extra_points,
                                                        tol.seed);
                          if (r.worst_residual >= worst) {
                            worst = r.worst_residual;
                            desc = r.describe();
                          }
                        }
                      w = desc;
                      return worst;
                    }});

  auto b_fields = polynomial_lie_fields(chart, alg);
  checks.push_back({"auto.connection-compat", chart->name(), tol.projection,
                    [&alg, &L, dim, chart, &tol, b_fields](std::string& w) {
                      double worst = 0;
                      std::string desc;
                      for (const auto& b : b_fields)
                        for (int mu = 0; mu < dim; ++mu) {
                          Coeff xb = alg.zero_element();
                          for (int k = 0; k < alg.dim(); ++k)
                            xb[static_cast<size_t>(k)] = b[static_cast<size_t>(k)].partial(mu);
                          Coeff tb = L.tau.apply(alg, b);
                          Coeff lhs = L.tau.apply(alg, xb);
                          Coeff xtb = alg.zero_element();
                          for (int k = 0; k < alg.dim(); ++k)
                            xtb[static_cast<size_t>(k)] = tb[static_cast<size_t>(k)].partial(mu);
                          Coeff rhs = cadd(xtb, alg.bracket(L.phi.coeff_at({mu}), tb));
                          auto r = coeff_identity(chart, lhs, rhs, tol.projection,
                                                  tol.extra_points, tol.seed);
                          if (r.worst_residual >= worst) {
                            worst = r.worst_residual;
                            desc = r.describe();
                          }
                        }
                      w = desc;
                      return worst;
                    }});

  checks.push_back({"auto.phi-flatness", chart->name(), tol.projection,
                    [&alg, &L, &tol](std::string& w) {
                      Form res =
                          L.phi.d() + wedge_bracket(L.phi, L.phi, alg).scaled(Rational(1, 2));
                      auto r = form_vanishes(res, tol.projection, tol.extra_points, tol.seed);
                      w = r.describe();
                      return r.worst_residual;
                    }});

  checks.push_back({"auto.beta-derivation", chart->name(), tol.projection,
                    [&alg, &L, dim, chart, &tol](std::string& w) {
                      double worst = 0;
                      std::string desc;
                      for (int mu = 0; mu < dim; ++mu)
                        for (int nu = 0; nu < dim; ++nu)
                          for (int l = 0; l < dim; ++l) {
                            Coeff dphi = alg.zero_element();
                            Coeff pmu = L.phi.coeff_at({mu});
                            for (int k = 0; k < alg.dim(); ++k)
                              dphi[static_cast<size_t>(k)] =
                                  pmu[static_cast<size_t>(k)].partial(l);
                            Scalar lhs =
                                L.beta[static_cast<size_t>(nu)][static_cast<size_t>(l)]
                                    .partial(mu) -
                                L.beta[static_cast<size_t>(mu)][static_cast<size_t>(l)]
                                    .partial(nu) +
                                L.beta[static_cast<size_t>(mu)][static_cast<size_t>(nu)]
                                    .partial(l) +
                                Scalar::constant(2) * alg.pairing(L.phi.coeff_at({nu}), dphi);
                            auto r = identical_on_samples(Scalar(chart, lhs.expr()),
                                                          zero_on(chart), tol.projection,
                                                          tol.extra_points, tol.seed);
                            if (r.worst_residual >= worst) {
                              worst = r.worst_residual;
                              desc = r.describe();
                            }
                          }
                      w = desc;
                      return worst;
                    }});

  for (const auto& r : L.tau.validate(alg, tol)) {
    checks.push_back({r.tag, r.location, r.tol, [r](std::string& w) {
                        w = r.witness;
                        return r.residual;
                      }});
  }

  auto sections = generate_test_sections(chart, alg, tol.seed);
  SplitMix64 rng(tol.seed ^ 0xb7aca7e5u);
  for (int t = 0; t < pair_count; ++t) {
    size_t i1 = rng.next() % sections.size();
    size_t i2 = rng.next() % sections.size();
    std::string loc = chart->name() + ":pair" + std::to_string(t);
    checks.push_back({"auto.bracket-preserved", loc, tol.projection,
                      [&alg, &L, sections, i1, i2, &tol](std::string& w) {
                        const Section &e1 = sections[i1], &e2 = sections[i2];
                        Section lhs = bracket_standard(alg, auto_apply(alg, L, e1),
                                                       auto_apply(alg, L, e2));
                        Section rhs = auto_apply(alg, L, bracket_standard(alg, e1, e2));
                        auto r = section_identity(lhs, rhs, tol.projection, tol);
                        w = r.describe();
                        return r.worst_residual;
                      }});
    checks.push_back({"auto.pairing-preserved", loc, tol.projection,
                      [&alg, &L, sections, i1, i2, &tol](std::string& w) {
                        const Section &e1 = sections[i1], &e2 = sections[i2];
                        Scalar lhs = pairing(alg, auto_apply(alg, L, e1), auto_apply(alg, L, e2));
                        Scalar rhs = pairing(alg, e1, e2);
                        auto r = identical_on_samples(lhs, rhs, tol.projection, tol.extra_points,
                                                      tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});
  }
  return run_checks(checks, mode);
}

CourantAuto auto_compose(const LieAlgebra& alg, const CourantAuto& L1, const CourantAuto& L2) {
  const ChartPtr& chart = L1.chart();
  const int dim = chart->dim();
  CourantAuto out{L1.phi + L1.tau.apply_form(alg, L2.phi), L1.tau.compose(alg, L2.tau), {}};
  out.beta.assign(static_cast<size_t>(dim),
                  std::vector<Scalar>(static_cast<size_t>(dim), Scalar::constant(0)));
  for (int mu = 0; mu < dim; ++mu) {
    Coeff t1phi2 = L1.tau.apply(alg, L2.phi.coeff_at({mu}));
    for (int nu = 0; nu < dim; ++nu) {
      out.beta[static_cast<size_t>(mu)][static_cast<size_t>(nu)] =
          L1.beta[static_cast<size_t>(mu)][static_cast<size_t>(nu)] +
          L2.beta[static_cast<size_t>(mu)][static_cast<size_t>(nu)] +
          Scalar::constant(-2) * alg.pairing(t1phi2, L1.phi.coeff_at({nu}));
    }
  }
  return out;
}

CourantAuto auto_inverse(const LieAlgebra& alg, const CourantAuto& L) {
  const ChartPtr& chart = L.chart();
  const int dim = chart->dim();
  TauField tinv = L.tau.inverse();
  CourantAuto out{-tinv.apply_form(alg, L.phi), tinv, {}};
  out.beta.assign(static_cast<size_t>(dim),
                  std::vector<Scalar>(static_cast<size_t>(dim), Scalar::constant(0)));
  for (int mu = 0; mu < dim; ++mu)
    for (int nu = 0; nu < dim; ++nu)
      out.beta[static_cast<size_t>(mu)][static_cast<size_t>(nu)] =
          -L.beta[static_cast<size_t>(mu)][static_cast<size_t>(nu)] -
          Scalar::constant(2) * alg.pairing(L.phi.coeff_at({mu}), L.phi.coeff_at({nu}));
  return out;
}

IdentityReport auto_identity(const LieAlgebra& alg, const CourantAuto& A, const CourantAuto& B,
                             double tol) {
  const ChartPtr& chart = A.chart();
  IdentityReport worst;
  worst.pass = true;
  auto merge = [&](const IdentityReport& r) {
    if (r.worst_residual >= worst.worst_residual) {
      bool keep = worst.pass;
      worst = r;
      worst.pass = keep && r.pass;
    } else if (!r.pass) {
      worst.pass = false;
    }
  };
  merge(form_identity(A.phi, B.phi, tol));
  for (int k = 0; k < alg.dim(); ++k)
    merge(coeff_identity(chart, A.tau.apply(alg, alg.basis_element(k)),
                         B.tau.apply(alg, alg.basis_element(k)), tol));
  for (int mu = 0; mu < chart->dim(); ++mu)
    merge(coeff_identity(chart, A.beta[static_cast<size_t>(mu)], B.beta[static_cast<size_t>(mu)],
                         tol));
  return worst;
}

// ---------------------------------------------------------------------------
// Inner automorphisms
// ---------------------------------------------------------------------------

IdentityReport gw_residual(const InnerAuto& in, const LieAlgebra& alg, const Tolerances& tol) {
  Form lhs = in.omega.d() + cartan3(in.g, alg, tol).scaled(Rational(1, 6));
  return form_vanishes(lhs, tol.projection, tol.extra_points, tol.seed);
}

CourantAuto inner_auto(const InnerAuto& in, const LieAlgebra& alg, const Tolerances& tol) {
  auto gw = gw_residual(in, alg, tol);
  if (!gw.pass)
    throw GWViolation("d omega + cartan/6 != 0: " + gw.describe(), gw.worst_residual);
  const ChartPtr& chart = in.g.chart();
  const int dim = chart->dim();
  Form A = mc_pullback(in.g, alg, tol);
  CourantAuto out{-A, TauField::ad(in.g), {}};
  out.beta.assign(static_cast<size_t>(dim),
                  std::vector<Scalar>(static_cast<size_t>(dim), Scalar::constant(0)));
  for (int mu = 0; mu < dim; ++mu)
    for (int nu = 0; nu < dim; ++nu) {
      std::vector<VecField> mn{VecField::coordinate(chart, mu), VecField::coordinate(chart, nu)};
      Scalar w = in.omega.eval_on(mn)[0];
      out.beta[static_cast<size_t>(mu)][static_cast<size_t>(nu)] =
          w - alg.pairing(A.coeff_at({mu}), A.coeff_at({nu}));
    }
  return out;
}

InnerAuto inner_compose(const InnerAuto& a, const InnerAuto& b, const LieAlgebra& alg,
                        const Tolerances& tol) {
  Form A1 = mc_pullback(a.g, alg, tol);
  Form A2 = mc_pullback(b.g, alg, tol);
  Form cross = wedge_K(A1, adjoint_form(a.g, alg, A2, tol), alg);
  return InnerAuto{a.g * b.g, a.omega + b.omega + cross};
}

InnerAuto inner_inverse(const InnerAuto& a, const LieAlgebra& alg) {
  (void)alg;
  return InnerAuto{a.g.inverse(), -a.omega};
}

// ---------------------------------------------------------------------------
// Action Courant algebroid
// ---------------------------------------------------------------------------

VecField ActionStructure::anchor(const Coeff& s) const {
  const ChartPtr& chart = rho.front().chart();
  VecField acc = VecField::zero(chart);
  for (size_t k = 0; k < rho.size(); ++k) acc = acc + rho[k].scaled(s[k]);
  return acc;
}

void ActionStructure::check_action_property(const Tolerances& tol) const {
  const ChartPtr& chart = rho.front().chart();
  for (int i = 0; i < alg_k->dim(); ++i)
    for (int j = 0; j < alg_k->dim(); ++j) {
      VecField lhs = vf_bracket(rho[static_cast<size_t>(i)], rho[static_cast<size_t>(j)]);
      VecField rhs = anchor(alg_k->bracket(alg_k->basis_element(i), alg_k->basis_element(j)));
      auto r = coeff_identity(chart, lhs.components(), rhs.components(), tol.projection,
                              tol.extra_points, tol.seed);
      if (!r.pass)
        throw ActionViolation("[rho(e_" + std::to_string(i) + "), rho(e_" + std::to_string(j) +
                              ")] != rho([e_i, e_j]): " + r.describe());
    }
}

Coeff action_courant_bracket(const ActionStructure& act, const Coeff& s1, const Coeff& s2) {
  const LieAlgebra& k = *act.alg_k;
  VecField r1 = act.anchor(s1);
  VecField r2 = act.anchor(s2);
  Coeff out = cadd(k.bracket(s1, s2), csub(r1.apply(s2), r2.apply(s1)));
  // rho^* (d s1, s2)^K: the functional l -> ((rho e_l)(s1), s2)^K raised by K^{-1}.
  Coeff functional = k.zero_element();
  for (int l = 0; l < k.dim(); ++l)
    functional[static_cast<size_t>(l)] = k.pairing(act.rho[static_cast<size_t>(l)].apply(s1), s2);
  return cadd(out, k.k_dual(functional));
}

}  // namespace ck
