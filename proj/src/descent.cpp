#include "courantkit/descent.hpp"

#include <algorithm>
#include <cmath>

namespace ck {

namespace {

std::string key_str(const std::vector<int>& idx) {
  std::string s;
  for (size_t i = 0; i < idx.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(idx[i]);
  }
  return s;
}

// face index keeping `position`: for pair (i,j), faces[0] lands in U_j and
// faces[1] in U_i, so restriction of chart-i data uses the face dropping the
// other position.
size_t face_keeping(const std::vector<int>& overlap, size_t position) {
  (void)overlap;
  return position == 0 ? 1 : 0;
}

Scalar zero_on(const ChartPtr& chart) { return Scalar(chart, Expr()); }

// 1-form (theta, c)^K : Y -> (theta(Y), c)^K for a Lie-valued 1-form theta.
Form pair_first_slot(const LieAlgebra& alg, const Form& theta, const Coeff& c) {
  const ChartPtr& chart = theta.chart();
  Form out = Form::scalar_zero(chart, 1);
  for (int nu = 0; nu < chart->dim(); ++nu)
    out.add_term({nu}, {alg.pairing(theta.coeff_at({nu}), c)});
  return out;
}

void append(std::vector<CheckResult>& out, std::vector<CheckResult>&& more) {
  for (auto& r : more) out.push_back(std::move(r));
}

}  // namespace

const Form& LieData::phi_at(const std::vector<int>& ij) const {
  auto it = phi.find(ij);
  if (it == phi.end()) throw MissingOverlap("phi on U_{" + key_str(ij) + "}");
  return it->second;
}

const TauField& LieData::tau_at(const std::vector<int>& ij) const {
  auto it = tau.find(ij);
  if (it == tau.end()) throw MissingOverlap("tau on U_{" + key_str(ij) + "}");
  return it->second;
}

CourantAuto CourantData::transition(const std::vector<int>& ij) const {
  CourantAuto L{lie.phi_at(ij), lie.tau_at(ij), beta.at(ij)};
  return L;
}

Form restrict_to(const Cover& cover, const std::vector<int>& overlap, size_t position,
                 const Form& chart_form) {
  const Overlap& o = cover.require(overlap);
  if (overlap.size() != 2) throw DomainError("restrict_to expects a pair overlap");
  return pullback(o.faces[face_keeping(overlap, position)], chart_form);
}

// ---------------------------------------------------------------------------
// Lie data validation
// ---------------------------------------------------------------------------

std::vector<CheckResult> validate_lie_data(const LieData& data, const Tolerances& tol,
                                           ExecMode mode) {
  const Cover& cover = *data.cover;
  const LieAlgebra& alg = *data.alg;
  std::vector<Check> checks;

  for (const Overlap* o : cover.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    const std::string loc = "U_{" + key_str(ij) + "}";
    const Form& phi = data.phi_at(ij);
    const TauField& tau = data.tau_at(ij);

    checks.push_back({"lie.phi-flatness", loc, tol.projection,
                      [&alg, &phi, &tol](std::string& w) {
                        Form res = phi.d() + wedge_bracket(phi, phi, alg).scaled(Rational(1, 2));
                        auto r = form_vanishes(res, tol.projection, tol.extra_points, tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});

    for (const auto& tr : tau.validate(alg, tol))
      checks.push_back({tr.tag, loc, tr.tol, [tr](std::string& w) {
                          w = tr.witness;
                          return tr.residual;
                        }});

    // tau-derivation compatibility on polynomial fields
    checks.push_back(
        {"lie.connection-compat", loc, tol.projection, [&, o](std::string& w) {
           const ChartPtr& chart = o->chart;
           auto b_fields = polynomial_lie_fields(chart, alg);
           double worst = 0;
           std::string desc;
           for (const auto& b : b_fields)
             for (int mu = 0; mu < chart->dim(); ++mu) {
               Coeff xb = alg.zero_element();
               for (int k = 0; k < alg.dim(); ++k)
                 xb[static_cast<size_t>(k)] = b[static_cast<size_t>(k)].partial(mu);
               Coeff tb = tau.apply(alg, b);
               Coeff xtb = alg.zero_element();
               for (int k = 0; k < alg.dim(); ++k)
                 xtb[static_cast<size_t>(k)] = tb[static_cast<size_t>(k)].partial(mu);
               Coeff rhs = xtb;
               Coeff br = alg.bracket(phi.coeff_at({mu}), tb);
               for (int k = 0; k < alg.dim(); ++k)
                 rhs[static_cast<size_t>(k)] = rhs[static_cast<size_t>(k)] + br[static_cast<size_t>(k)];
               auto r = coeff_identity(chart, tau.apply(alg, xb), rhs, tol.projection,
                                       tol.extra_points, tol.seed);
               if (r.worst_residual >= worst) {
                 worst = r.worst_residual;
                 desc = r.describe();
               }
             }
           w = desc;
           return worst;
         }});

    // theta transition: theta_i = tau theta_j + phi on the overlap
    checks.push_back({"lie.theta-transition", loc, tol.projection, [&, o, ij](std::string& w) {
                        Form ti = restrict_to(cover, ij, 0,
                                              data.theta[static_cast<size_t>(ij[0])]);
                        Form tj = restrict_to(cover, ij, 1,
                                              data.theta[static_cast<size_t>(ij[1])]);
                        Form rhs = tau.apply_form(alg, tj) + phi;
                        auto r = form_identity(ti, rhs, tol.projection, tol.extra_points,
                                               tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});
  }

  // cocycle conditions on triples
  for (const Overlap* o : cover.of_degree(2)) {
    const std::vector<int>& ijk = o->indices;
    const std::string loc = "U_{" + key_str(ijk) + "}";
    std::vector<int> ij = {ijk[0], ijk[1]};
    std::vector<int> ik = {ijk[0], ijk[2]};
    std::vector<int> jk = {ijk[1], ijk[2]};

    checks.push_back(
        {"lie.phi-cocycle", loc, tol.projection, [&, o, ij, ik, jk](std::string& w) {
           Form phi_ij = pullback(o->faces[2], data.phi_at(ij));
           Form phi_ik = pullback(o->faces[1], data.phi_at(ik));
           Form phi_jk = pullback(o->faces[0], data.phi_at(jk));
           TauField tau_ij = data.tau_at(ij).pulled_back(o->faces[2]);
           Form rhs = phi_ij + tau_ij.apply_form(alg, phi_jk);
           auto r = form_identity(phi_ik, rhs, tol.projection, tol.extra_points, tol.seed);
           w = r.describe();
           return r.worst_residual;
         }});

    checks.push_back(
        {"lie.tau-cocycle", loc, tol.projection, [&, o, ij, ik, jk](std::string& w) {
           TauField tau_ij = data.tau_at(ij).pulled_back(o->faces[2]);
           TauField tau_ik = data.tau_at(ik).pulled_back(o->faces[1]);
           TauField tau_jk = data.tau_at(jk).pulled_back(o->faces[0]);
           double worst = 0;
           std::string desc;
           for (int k = 0; k < alg.dim(); ++k) {
             Coeff lhs = tau_ij.apply(alg, tau_jk.apply(alg, alg.basis_element(k)));
             Coeff rhs = tau_ik.apply(alg, alg.basis_element(k));
             auto r = coeff_identity(o->chart, lhs, rhs, tol.projection, tol.extra_points,
                                     tol.seed);
             if (r.worst_residual >= worst) {
               worst = r.worst_residual;
               desc = r.describe();
             }
           }
           w = desc;
           return worst;
         }});
  }

  return run_checks(checks, mode);
}

// ---------------------------------------------------------------------------
// Curvature and Pontryagin
// ---------------------------------------------------------------------------

std::vector<Form> curvature_R(const LieData& data, const Tolerances& tol) {
  const Cover& cover = *data.cover;
  const LieAlgebra& alg = *data.alg;
  std::vector<Form> R;
  R.reserve(data.theta.size());
  for (const auto& th : data.theta) R.push_back(curvature_form(th, alg));
  for (const Overlap* o : cover.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    Form Ri = restrict_to(cover, ij, 0, R[static_cast<size_t>(ij[0])]);
    Form Rj = restrict_to(cover, ij, 1, R[static_cast<size_t>(ij[1])]);
    Form tRj = data.tau_at(ij).apply_form(alg, Rj);
    auto r = form_identity(Ri, tRj, tol.projection, tol.extra_points, tol.seed);
    if (!r.pass)
      throw GlueFailure("curvature-glue", "tau R_j != R_i on U_{" + key_str(ij) + "}: " +
                                              r.describe());
  }
  return R;
}

std::vector<Form> pontryagin_p1(const LieData& data, const Tolerances& tol) {
  const Cover& cover = *data.cover;
  const LieAlgebra& alg = *data.alg;
  std::vector<Form> R = curvature_R(data, tol);
  std::vector<Form> p1;
  p1.reserve(R.size());
  for (const auto& r : R) p1.push_back(wedge_K(r, r, alg));
  for (const Overlap* o : cover.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    Form pi = restrict_to(cover, ij, 0, p1[static_cast<size_t>(ij[0])]);
    Form pj = restrict_to(cover, ij, 1, p1[static_cast<size_t>(ij[1])]);
    auto r = form_identity(pi, pj, tol.projection, tol.extra_points, tol.seed);
    if (!r.pass)
      throw GlueFailure("p1-glue",
                        "(R,R) mismatch on U_{" + key_str(ij) + "}: " + r.describe());
  }
  return p1;
}

std::vector<CheckResult> check_p1_trivialized(const LieData& data, const std::vector<Form>& H,
                                              const Tolerances& tol, ExecMode mode) {
  const Cover& cover = *data.cover;
  const LieAlgebra& alg = *data.alg;
  std::vector<Check> checks;
  for (size_t i = 0; i < data.theta.size(); ++i) {
    checks.push_back(
        {"p1.trivialized", cover.chart(static_cast<int>(i))->name(), tol.projection,
         [&, i](std::string& w) {
           Form R = curvature_form(data.theta[i], alg);
           auto r = form_identity(H[i].d(), wedge_K(R, R, alg), tol.projection, tol.extra_points,
                                  tol.seed);
           w = r.describe();
           return r.worst_residual;
         }});
  }
  for (const Overlap* o : cover.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    checks.push_back({"p1.h-agreement", "U_{" + key_str(ij) + "}", tol.projection,
                      [&, ij](std::string& w) {
                        Form Hi = restrict_to(cover, ij, 0, H[static_cast<size_t>(ij[0])]);
                        Form Hj = restrict_to(cover, ij, 1, H[static_cast<size_t>(ij[1])]);
                        auto r = form_identity(Hi, Hj, tol.projection, tol.extra_points,
                                               tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});
  }
  return run_checks(checks, mode);
}

// ---------------------------------------------------------------------------
// Lift and Courant data validation
// ---------------------------------------------------------------------------

CourantData lift_courant_from_lie(const LieData& data, std::vector<Form> B,
                                  const Tolerances& tol) {
  const Cover& cover = *data.cover;
  const LieAlgebra& alg = *data.alg;
  // obstruction check: cs3(theta_i) - dB_i glue to a global 3-form
  for (const Overlap* o : cover.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    Form Hi = cs3(data.theta[static_cast<size_t>(ij[0])], alg) - B[static_cast<size_t>(ij[0])].d();
    Form Hj = cs3(data.theta[static_cast<size_t>(ij[1])], alg) - B[static_cast<size_t>(ij[1])].d();
    auto r = form_identity(restrict_to(cover, ij, 0, Hi), restrict_to(cover, ij, 1, Hj),
                           tol.projection, tol.extra_points, tol.seed);
    if (!r.pass)
      throw GlueFailure("lift-obstruction", "cs3(theta) - dB does not glue on U_{" +
                                                key_str(ij) + "}: " + r.describe());
  }

  CourantData out{data, std::move(B), {}};
  for (const Overlap* o : cover.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    const ChartPtr& chart = o->chart;
    int dim = chart->dim();
    Form Bi = restrict_to(cover, ij, 0, out.B[static_cast<size_t>(ij[0])]);
    Form Bj = restrict_to(cover, ij, 1, out.B[static_cast<size_t>(ij[1])]);
    Form dB = Bj - Bi;
    Form ti = restrict_to(cover, ij, 0, data.theta[static_cast<size_t>(ij[0])]);
    Form tj = restrict_to(cover, ij, 1, data.theta[static_cast<size_t>(ij[1])]);
    const Form& phi = data.phi_at(ij);
    const TauField& tau = data.tau_at(ij);
    std::vector<std::vector<Scalar>> beta(
        static_cast<size_t>(dim), std::vector<Scalar>(static_cast<size_t>(dim), zero_on(chart)));
    for (int mu = 0; mu < dim; ++mu) {
      Coeff ttj = tau.apply(alg, tj.coeff_at({mu}));
      for (int nu = 0; nu < dim; ++nu) {
        std::vector<VecField> mn{VecField::coordinate(chart, mu),
                                 VecField::coordinate(chart, nu)};
        // beta(X)(Y) = i_X(B_j - B_i)(Y) - (theta_i(Y), theta_i(X)) + (theta_j(Y), theta_j(X))
        //              + 2 (tau theta_j(X), phi(Y))
        Scalar v = dB.eval_on(mn)[0] -
                   alg.pairing(ti.coeff_at({nu}), ti.coeff_at({mu})) +
                   alg.pairing(tj.coeff_at({nu}), tj.coeff_at({mu})) +
                   Scalar::constant(2) * alg.pairing(ttj, phi.coeff_at({nu}));
        beta[static_cast<size_t>(mu)][static_cast<size_t>(nu)] = v;
      }
    }
    out.beta.emplace(ij, std::move(beta));
  }
  return out;
}

std::vector<CheckResult> validate_courant_data(const CourantData& data, const Tolerances& tol,
                                               ExecMode mode) {
  const Cover& cover = data.cover();
  const LieAlgebra& alg = data.alg();
  std::vector<CheckResult> out = validate_lie_data(data.lie, tol, mode);

  std::vector<Check> checks;
  for (const Overlap* o : cover.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    const std::string loc = "U_{" + key_str(ij) + "}";

    checks.push_back({"courant.beta-transition", loc, tol.projection, [&, o, ij](std::string& w) {
                        const ChartPtr& chart = o->chart;
                        int dim = chart->dim();
                        Form Bi = restrict_to(cover, ij, 0, data.B[static_cast<size_t>(ij[0])]);
                        Form Bj = restrict_to(cover, ij, 1, data.B[static_cast<size_t>(ij[1])]);
                        Form dB = Bj - Bi;
                        Form ti = restrict_to(cover, ij, 0,
                                              data.lie.theta[static_cast<size_t>(ij[0])]);
                        Form tj = restrict_to(cover, ij, 1,
                                              data.lie.theta[static_cast<size_t>(ij[1])]);
                        const Form& phi = data.lie.phi_at(ij);
                        const TauField& tau = data.lie.tau_at(ij);
                        const auto& beta = data.beta.at(ij);
                        double worst = 0;
                        std::string desc;
                        for (int mu = 0; mu < dim; ++mu) {
                          Coeff ttj = tau.apply(alg, tj.coeff_at({mu}));
                          for (int nu = 0; nu < dim; ++nu) {
                            std::vector<VecField> mn{VecField::coordinate(chart, mu),
                                                     VecField::coordinate(chart, nu)};
                            Scalar lhs = dB.eval_on(mn)[0];
                            Scalar rhs =
                                beta[static_cast<size_t>(mu)][static_cast<size_t>(nu)] +
                                alg.pairing(ti.coeff_at({nu}), ti.coeff_at({mu})) -
                                alg.pairing(tj.coeff_at({nu}), tj.coeff_at({mu})) -
                                Scalar::constant(2) * alg.pairing(ttj, phi.coeff_at({nu}));
                            auto r = identical_on_samples(Scalar(chart, lhs.expr()),
                                                          Scalar(chart, rhs.expr()),
                                                          tol.projection, tol.extra_points,
                                                          tol.seed);
                            if (r.worst_residual >= worst) {
                              worst = r.worst_residual;
                              desc = r.describe();
                            }
                          }
                        }
                        w = desc;
                        return worst;
                      }});

    checks.push_back({"courant.cs3-descent", loc, tol.projection, [&, ij](std::string& w) {
                        Form ci = cs3(data.lie.theta[static_cast<size_t>(ij[0])], alg);
                        Form cj = cs3(data.lie.theta[static_cast<size_t>(ij[1])], alg);
                        Form lhs = restrict_to(cover, ij, 1, cj) - restrict_to(cover, ij, 0, ci);
                        Form Bi = restrict_to(cover, ij, 0, data.B[static_cast<size_t>(ij[0])]);
                        Form Bj = restrict_to(cover, ij, 1, data.B[static_cast<size_t>(ij[1])]);
                        auto r = form_identity(lhs, (Bj - Bi).d(), tol.projection,
                                               tol.extra_points, tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});
  }

  // full transition-matrix cocycle on triples, including the beta component
  for (const Overlap* o : cover.of_degree(2)) {
    const std::vector<int>& ijk = o->indices;
    checks.push_back(
        {"courant.transition-cocycle", "U_{" + key_str(ijk) + "}", tol.projection,
         [&, o, ijk](std::string& w) {
           std::vector<int> ij = {ijk[0], ijk[1]};
           std::vector<int> ik = {ijk[0], ijk[2]};
           std::vector<int> jk = {ijk[1], ijk[2]};
           CourantAuto Lij = data.transition(ij).pulled_back(o->faces[2], alg);
           CourantAuto Lik = data.transition(ik).pulled_back(o->faces[1], alg);
           CourantAuto Ljk = data.transition(jk).pulled_back(o->faces[0], alg);
           auto r = auto_identity(alg, auto_compose(alg, Lij, Ljk), Lik, tol.projection);
           w = r.describe();
           return r.worst_residual;
         }});
  }

  append(out, run_checks(checks, mode));
  return out;
}

// ---------------------------------------------------------------------------
// Gluing
// ---------------------------------------------------------------------------

namespace {

// S_i(X + a + xi): the isotropic splitting plus orthogonal fiber splitting.
Section splitting_apply(const LieAlgebra& alg, const Form& theta, const Form& B,
                        const Section& e) {
  const ChartPtr& chart = e.X.chart();
  std::vector<VecField> vx{e.X};
  Coeff thX = theta.eval_on(vx);
  Coeff a2 = thX;
  for (int k = 0; k < alg.dim(); ++k)
    a2[static_cast<size_t>(k)] = a2[static_cast<size_t>(k)] + e.a[static_cast<size_t>(k)];
  Form xi2 = e.xi - pair_first_slot(alg, theta, thX) - B.interior(e.X) -
             pair_first_slot(alg, theta, e.a).scaled(Rational::integer(2));
  return Section{e.X, std::move(a2), std::move(xi2)};
}

Section splitting_unapply(const LieAlgebra& alg, const Form& theta, const Form& B,
                          const Section& e) {
  std::vector<VecField> vx{e.X};
  Coeff thX = theta.eval_on(vx);
  Coeff a2 = e.a;
  for (int k = 0; k < alg.dim(); ++k)
    a2[static_cast<size_t>(k)] = a2[static_cast<size_t>(k)] - thX[static_cast<size_t>(k)];
  Form xi2 = e.xi + B.interior(e.X) + pair_first_slot(alg, theta, e.a).scaled(Rational::integer(2)) -
             pair_first_slot(alg, theta, thX);
  return Section{e.X, std::move(a2), std::move(xi2)};
}

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

std::vector<Form> courant_curvature(const CourantData& data) {
  const LieAlgebra& alg = data.alg();
  std::vector<Form> H;
  H.reserve(data.B.size());
  for (size_t i = 0; i < data.B.size(); ++i)
    H.push_back(cs3(data.lie.theta[i], alg) - data.B[i].d());
  return H;
}

GluedCourant glue_courant(const CourantData& data, const Tolerances& tol, ExecMode mode,
                          int section_pairs) {
  const Cover& cover = data.cover();
  const LieAlgebra& alg = data.alg();
  AlgPtr alg_ptr = data.lie.alg;

  GluedCourant glued;
  std::vector<Form> H = courant_curvature(data);
  for (size_t i = 0; i < data.B.size(); ++i) {
    CourantParams p{alg_ptr, data.lie.theta[i], curvature_form(data.lie.theta[i], alg), H[i]};
    glued.p1.push_back(wedge_K(p.R, p.R, alg));
    glued.params.push_back(std::move(p));
  }

  std::vector<Check> checks;

  // connection match tau grad^j = grad^i tau on overlaps
  for (const Overlap* o : cover.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    const std::string loc = "U_{" + key_str(ij) + "}";
    checks.push_back(
        {"glue.connection-match", loc, tol.projection, [&, o, ij](std::string& w) {
           const ChartPtr& chart = o->chart;
           Form ti = restrict_to(cover, ij, 0, data.lie.theta[static_cast<size_t>(ij[0])]);
           Form tj = restrict_to(cover, ij, 1, data.lie.theta[static_cast<size_t>(ij[1])]);
           const TauField& tau = data.lie.tau_at(ij);
           auto b_fields = polynomial_lie_fields(chart, alg);
           double worst = 0;
           std::string desc;
           for (const auto& b : b_fields)
             for (int mu = 0; mu < chart->dim(); ++mu) {
               Coeff xb = alg.zero_element();
               for (int k = 0; k < alg.dim(); ++k)
                 xb[static_cast<size_t>(k)] = b[static_cast<size_t>(k)].partial(mu);
               // tau(grad^j_mu b) = grad^i_mu (tau b)
               Coeff gradj = xb;
               Coeff brj = alg.bracket(tj.coeff_at({mu}), b);
               for (int k = 0; k < alg.dim(); ++k)
                 gradj[static_cast<size_t>(k)] = gradj[static_cast<size_t>(k)] + brj[static_cast<size_t>(k)];
               Coeff lhs = tau.apply(alg, gradj);
               Coeff tb = tau.apply(alg, b);
               Coeff gradi = alg.zero_element();
               for (int k = 0; k < alg.dim(); ++k)
                 gradi[static_cast<size_t>(k)] = tb[static_cast<size_t>(k)].partial(mu);
               Coeff bri = alg.bracket(ti.coeff_at({mu}), tb);
               for (int k = 0; k < alg.dim(); ++k)
                 gradi[static_cast<size_t>(k)] = gradi[static_cast<size_t>(k)] + bri[static_cast<size_t>(k)];
               auto r = coeff_identity(chart, lhs, gradi, tol.projection, tol.extra_points,
                                       tol.seed);
               if (r.worst_residual >= worst) {
                 worst = r.worst_residual;
                 desc = r.describe();
               }
             }
           w = desc;
           return worst;
         }});

    checks.push_back({"glue.curvature-match", loc, tol.projection, [&, ij](std::string& w) {
                        Form Ri = restrict_to(cover, ij, 0,
                                              glued.params[static_cast<size_t>(ij[0])].R);
                        Form Rj = restrict_to(cover, ij, 1,
                                              glued.params[static_cast<size_t>(ij[1])].R);
                        Form tRj = data.lie.tau_at(ij).apply_form(alg, Rj);
                        auto r = form_identity(Ri, tRj, tol.projection, tol.extra_points,
                                               tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});

    checks.push_back({"glue.h-agreement", loc, tol.projection, [&, ij](std::string& w) {
                        Form Hi = restrict_to(cover, ij, 0, H[static_cast<size_t>(ij[0])]);
                        Form Hj = restrict_to(cover, ij, 1, H[static_cast<size_t>(ij[1])]);
                        auto r = form_identity(Hi, Hj, tol.projection, tol.extra_points,
                                               tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});
  }

  // per-chart certificates
  for (size_t i = 0; i < glued.params.size(); ++i) {
    const std::string loc = cover.chart(static_cast<int>(i))->name();
    checks.push_back({"glue.bianchi", loc, tol.projection, [&, i](std::string& w) {
                        auto r = form_identity(glued.params[i].H.d(),
                                               wedge_K(glued.params[i].R, glued.params[i].R, alg),
                                               tol.projection, tol.extra_points, tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});

    // splitting isotropy at samples
    checks.push_back(
        {"glue.splitting-isotropy", loc, tol.projection, [&, i](std::string& w) {
           const ChartPtr& chart = cover.chart(static_cast<int>(i));
           const Form& theta = data.lie.theta[i];
           const Form& B = data.B[i];
           double worst = 0;
           std::string desc;
           for (int mu = 0; mu < chart->dim(); ++mu) {
             Section sx = Section::zero(chart, alg);
             sx.X = VecField::coordinate(chart, mu);
             Section Sx = splitting_apply(alg, theta, B, sx);
             for (int nu = 0; nu < chart->dim(); ++nu) {
               Section sy = Section::zero(chart, alg);
               sy.X = VecField::coordinate(chart, nu);
               Section Sy = splitting_apply(alg, theta, B, sy);
               auto r = identical_on_samples(pairing(alg, Sx, Sy), zero_on(chart),
                                             tol.projection, tol.extra_points, tol.seed);
               if (r.worst_residual >= worst) {
                 worst = r.worst_residual;
                 desc = r.describe();
               }
             }
             for (int k = 0; k < alg.dim(); ++k) {
               Section sa = Section::zero(chart, alg);
               sa.a = alg.basis_element(k);
               Section Sa = splitting_apply(alg, theta, B, sa);
               auto r = identical_on_samples(pairing(alg, Sx, Sa), zero_on(chart),
                                             tol.projection, tol.extra_points, tol.seed);
               if (r.worst_residual >= worst) {
                 worst = r.worst_residual;
                 desc = r.describe();
               }
             }
           }
           w = desc;
           return worst;
         }});

    // conjugation identity: S^{-1}[S e1, S e2]_std = [e1, e2]_{grad,R,H}
    auto sections = generate_test_sections(cover.chart(static_cast<int>(i)), alg, tol.seed + i);
    SplitMix64 rng(tol.seed ^ (0x91ab3full + i));
    for (int t = 0; t < section_pairs; ++t) {
      size_t i1 = rng.next() % sections.size();
      size_t i2 = rng.next() % sections.size();
      checks.push_back(
          {"glue.conjugation", loc + ":pair" + std::to_string(t), tol.projection,
           [&, i, i1, i2, sections](std::string& w) {
             const Form& theta = data.lie.theta[i];
             const Form& B = data.B[i];
             Section lhs = splitting_unapply(
                 alg, theta, B,
                 bracket_standard(alg, splitting_apply(alg, theta, B, sections[i1]),
                                  splitting_apply(alg, theta, B, sections[i2])));
             Section rhs = bracket_general(glued.params[i], sections[i1], sections[i2]);
             auto r = section_identity(lhs, rhs, tol.projection, tol);
             w = r.describe();
             return r.worst_residual;
           }});
    }
  }

  glued.certificates = run_checks(checks, mode);
  for (const auto& r : glued.certificates)
    if (!r.pass)
      throw GlueFailure(r.tag, r.location + ": " + r.witness + " residual " +
                                   std::to_string(r.residual));
  return glued;
}

// ---------------------------------------------------------------------------
// Torsor action
// ---------------------------------------------------------------------------

CourantData torsor_action_h(const CourantData& data, const std::vector<Form>& Bh,
                            const Tolerances& tol) {
  const Cover& cover = data.cover();
  // dBh_i must agree on overlaps (they glue to a closed global 3-form)
  for (const Overlap* o : cover.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    Form di = restrict_to(cover, ij, 0, Bh[static_cast<size_t>(ij[0])].d());
    Form dj = restrict_to(cover, ij, 1, Bh[static_cast<size_t>(ij[1])].d());
    auto r = form_identity(di, dj, tol.projection, tol.extra_points, tol.seed);
    if (!r.pass)
      throw GlueFailure("torsor-h-glue",
                        "dB^h mismatch on U_{" + key_str(ij) + "}: " + r.describe());
  }
  CourantData out = data;
  for (size_t i = 0; i < out.B.size(); ++i) out.B[i] = out.B[i] + Bh[i];
  for (auto& [ij, beta] : out.beta) {
    const Overlap& o = cover.require(ij);
    const ChartPtr& chart = o.chart;
    Form bhj = restrict_to(cover, ij, 1, Bh[static_cast<size_t>(ij[1])]);
    Form bhi = restrict_to(cover, ij, 0, Bh[static_cast<size_t>(ij[0])]);
    Form diff = bhj - bhi;
    for (int mu = 0; mu < chart->dim(); ++mu)
      for (int nu = 0; nu < chart->dim(); ++nu) {
        std::vector<VecField> mn{VecField::coordinate(chart, mu),
                                 VecField::coordinate(chart, nu)};
        beta[static_cast<size_t>(mu)][static_cast<size_t>(nu)] =
            beta[static_cast<size_t>(mu)][static_cast<size_t>(nu)] + diff.eval_on(mn)[0];
      }
  }
  return out;
}

std::vector<Form> torsor_difference(const CourantData& a, const CourantData& b) {
  std::vector<Form> out;
  out.reserve(a.B.size());
  for (size_t i = 0; i < a.B.size(); ++i) out.push_back(b.B[i] - a.B[i]);
  return out;
}

// ---------------------------------------------------------------------------
// 1-morphisms
// ---------------------------------------------------------------------------

std::vector<CheckResult> validate_courant_1morphism(const CourantData& source,
                                                    const CourantData& target,
                                                    const std::vector<CourantAuto>& lambda,
                                                    const Tolerances& tol, ExecMode mode) {
  const Cover& cover = source.cover();
  const LieAlgebra& alg = source.alg();
  std::vector<Check> checks;

  for (size_t i = 0; i < lambda.size(); ++i) {
    const std::string loc = cover.chart(static_cast<int>(i))->name();
    const Form& th_s = source.lie.theta[i];  // tilde side
    const Form& th_t = target.lie.theta[i];
    const Form& B_s = source.B[i];
    const Form& B_t = target.B[i];
    const CourantAuto& L = lambda[i];

    checks.push_back({"morphism.theta", loc, tol.projection, [&, i](std::string& w) {
                        Form rhs = lambda[i].tau.apply_form(alg, th_s) + lambda[i].phi;
                        auto r = form_identity(th_t, rhs, tol.projection, tol.extra_points,
                                               tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});

    checks.push_back(
        {"morphism.b-transition", loc, tol.projection, [&, i](std::string& w) {
           const ChartPtr& chart = cover.chart(static_cast<int>(i));
           int dim = chart->dim();
           Form diff = B_s - B_t;
           double worst = 0;
           std::string desc;
           for (int mu = 0; mu < dim; ++mu) {
             Coeff tts = L.tau.apply(alg, th_s.coeff_at({mu}));
             for (int nu = 0; nu < dim; ++nu) {
               std::vector<VecField> mn{VecField::coordinate(chart, mu),
                                        VecField::coordinate(chart, nu)};
               Scalar lhs = diff.eval_on(mn)[0];
               Scalar rhs = L.beta[static_cast<size_t>(mu)][static_cast<size_t>(nu)] +
                            alg.pairing(th_t.coeff_at({nu}), th_t.coeff_at({mu})) -
                            alg.pairing(th_s.coeff_at({nu}), th_s.coeff_at({mu})) -
                            Scalar::constant(2) * alg.pairing(tts, L.phi.coeff_at({nu}));
               auto r = identical_on_samples(Scalar(chart, lhs.expr()), Scalar(chart, rhs.expr()),
                                             tol.projection, tol.extra_points, tol.seed);
               if (r.worst_residual >= worst) {
                 worst = r.worst_residual;
                 desc = r.describe();
               }
             }
           }
           w = desc;
           return worst;
         }});

    checks.push_back({"morphism.cs3-shift", loc, tol.projection, [&, i](std::string& w) {
                        Form lhs = cs3(th_s, alg) - cs3(th_t, alg);
                        auto r = form_identity(lhs, (B_s - B_t).d(), tol.projection,
                                               tol.extra_points, tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});

    // splitting preservation: Lambda_i S~_i = S_i on generators
    checks.push_back(
        {"morphism.splitting", loc, tol.projection, [&, i](std::string& w) {
           const ChartPtr& chart = cover.chart(static_cast<int>(i));
           double worst = 0;
           std::string desc;
           for (int mu = 0; mu < chart->dim(); ++mu) {
             Section sx = Section::zero(chart, alg);
             sx.X = VecField::coordinate(chart, mu);
             Section lhs = auto_apply(alg, L, splitting_apply(alg, th_s, B_s, sx));
             Section rhs = splitting_apply(alg, th_t, B_t, sx);
             auto r = section_identity(lhs, rhs, tol.projection, tol);
             if (r.worst_residual >= worst) {
               worst = r.worst_residual;
               desc = r.describe();
             }
           }
           for (int k = 0; k < alg.dim(); ++k) {
             Section sa = Section::zero(chart, alg);
             sa.a = alg.basis_element(k);
             Section lhs = auto_apply(alg, L, splitting_apply(alg, th_s, B_s, sa));
             Section rhs = splitting_apply(alg, th_t, B_t, sa);
             auto r = section_identity(lhs, rhs, tol.projection, tol);
             if (r.worst_residual >= worst) {
               worst = r.worst_residual;
               desc = r.describe();
             }
           }
           w = desc;
           return worst;
         }});
  }

  // compatibility square on pair overlaps
  for (const Overlap* o : cover.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    checks.push_back(
        {"morphism.square", "U_{" + key_str(ij) + "}", tol.projection, [&, o, ij](std::string& w) {
           CourantAuto Lij_t = target.transition(ij);
           CourantAuto Lij_s = source.transition(ij);
           CourantAuto Li = lambda[static_cast<size_t>(ij[0])].pulled_back(
               o->faces[face_keeping(ij, 0)], alg);
           CourantAuto Lj = lambda[static_cast<size_t>(ij[1])].pulled_back(
               o->faces[face_keeping(ij, 1)], alg);
           auto r = auto_identity(alg, auto_compose(alg, Lij_t, Lj),
                                  auto_compose(alg, Li, Lij_s), tol.projection);
           w = r.describe();
           return r.worst_residual;
         }});
  }

  return run_checks(checks, mode);
}

LieData project_courant_to_lie(const CourantData& data) { return data.lie; }

// ---------------------------------------------------------------------------
// Exact data
// ---------------------------------------------------------------------------

std::vector<CheckResult> validate_exact_data(const ExactData& data, const Tolerances& tol,
                                             ExecMode mode) {
  const Cover& cover = *data.cover;
  std::vector<Check> checks;
  for (const Overlap* o : cover.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    const std::string loc = "U_{" + key_str(ij) + "}";
    const Form& curly = data.curly.at(ij);
    checks.push_back({"exact.b-transition", loc, tol.projection, [&, ij, &curly](std::string& w) {
                        Form Bi = restrict_to(cover, ij, 0, data.B[static_cast<size_t>(ij[0])]);
                        Form Bj = restrict_to(cover, ij, 1, data.B[static_cast<size_t>(ij[1])]);
                        auto r = form_identity(Bj - Bi, curly, tol.projection, tol.extra_points,
                                               tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});
    checks.push_back({"exact.closed", loc, tol.projection, [&curly, &tol](std::string& w) {
                        auto r = form_vanishes(curly.d(), tol.projection, tol.extra_points,
                                               tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});
  }
  for (const Overlap* o : cover.of_degree(2)) {
    const std::vector<int>& ijk = o->indices;
    checks.push_back(
        {"exact.cocycle", "U_{" + key_str(ijk) + "}", tol.projection, [&, o, ijk](std::string& w) {
           std::vector<int> ij = {ijk[0], ijk[1]};
           std::vector<int> ik = {ijk[0], ijk[2]};
           std::vector<int> jk = {ijk[1], ijk[2]};
           Form cij = pullback(o->faces[2], data.curly.at(ij));
           Form cik = pullback(o->faces[1], data.curly.at(ik));
           Form cjk = pullback(o->faces[0], data.curly.at(jk));
           auto r = form_identity(cij + cjk, cik, tol.projection, tol.extra_points, tol.seed);
           w = r.describe();
           return r.worst_residual;
         }});
  }
  return run_checks(checks, mode);
}

std::vector<Form> exact_glued_curvature(const ExactData& data, const Tolerances& tol) {
  const Cover& cover = *data.cover;
  std::vector<Form> h;
  h.reserve(data.B.size());
  for (const auto& B : data.B) h.push_back(-B.d());
  for (const Overlap* o : cover.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    Form hi = restrict_to(cover, ij, 0, h[static_cast<size_t>(ij[0])]);
    Form hj = restrict_to(cover, ij, 1, h[static_cast<size_t>(ij[1])]);
    auto r = form_identity(hi, hj, tol.projection, tol.extra_points, tol.seed);
    if (!r.pass)
      throw GlueFailure("exact-h-glue",
                        "curvature mismatch on U_{" + key_str(ij) + "}: " + r.describe());
  }
  return h;
}

ExactData exact_b_field(const ExactData& data, const std::vector<Form>& b,
                        const Tolerances& tol) {
  for (const auto& f : b) {
    auto r = form_vanishes(f.d(), tol.projection, tol.extra_points, tol.seed);
    if (!r.pass) throw GlueFailure("exact-b-field", "B-field shift is not closed");
  }
  ExactData out = data;
  for (size_t i = 0; i < out.B.size(); ++i) out.B[i] = out.B[i] + b[i];
  return out;
}

CourantData embed_exact_in_transitive(const ExactData& data, AlgPtr alg) {
  const Cover& cover = *data.cover;
  if (!alg) alg = std::make_shared<const LieAlgebra>(LieAlgebra::zero_algebra());
  CourantData out;
  out.lie.cover = data.cover;
  out.lie.alg = alg;
  for (int i = 0; i < cover.chart_count(); ++i)
    out.lie.theta.push_back(lie_zero_form(cover.chart(i), 1, *alg));
  out.B = data.B;
  for (const auto& [ij, curly] : data.curly) {
    const Overlap& o = cover.require(ij);
    out.lie.phi.emplace(ij, lie_zero_form(o.chart, 1, *alg));
    out.lie.tau.emplace(ij, TauField::identity(o.chart));
    const ChartPtr& chart = o.chart;
    int dim = chart->dim();
    std::vector<std::vector<Scalar>> beta(
        static_cast<size_t>(dim), std::vector<Scalar>(static_cast<size_t>(dim), zero_on(chart)));
    for (int mu = 0; mu < dim; ++mu)
      for (int nu = 0; nu < dim; ++nu) {
        std::vector<VecField> mn{VecField::coordinate(chart, mu),
                                 VecField::coordinate(chart, nu)};
        beta[static_cast<size_t>(mu)][static_cast<size_t>(nu)] = curly.eval_on(mn)[0];
      }
    out.beta.emplace(ij, std::move(beta));
  }
  return out;
}

}  // namespace ck
