#include "courantkit/phi.hpp"

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

// beta tensor of the canonical transition: the antisymmetric 2-form part
// omega = (A_mc, theta_target)^K + dA + omega2 plus the symmetric part
// -(A_mc_mu, A_mc_nu)^K. The pairing-term orientation is the one forced by
// the B-difference transition identity (and equivalently by the inner
// constraint through the cs3 gauge-shift identity).
std::vector<std::vector<Scalar>> canonical_beta(const LieAlgebra& alg, const Form& A_mc,
                                                const Form& theta_target, const Form& dA_plus_w2) {
  const ChartPtr& chart = A_mc.chart();
  const int dim = chart->dim();
  Form anti = wedge_K(A_mc, theta_target, alg) + dA_plus_w2;
  std::vector<std::vector<Scalar>> beta(
      static_cast<size_t>(dim),
      std::vector<Scalar>(static_cast<size_t>(dim), Scalar(chart, Expr())));
  for (int mu = 0; mu < dim; ++mu)
    for (int nu = 0; nu < dim; ++nu) {
      std::vector<VecField> mn{VecField::coordinate(chart, mu), VecField::coordinate(chart, nu)};
      beta[static_cast<size_t>(mu)][static_cast<size_t>(nu)] =
          anti.eval_on(mn)[0] - alg.pairing(A_mc.coeff_at({mu}), A_mc.coeff_at({nu}));
    }
  return beta;
}

}  // namespace

PhiOutput phi_object(const StringData& data, const Tolerances& tol) {
  const Cover& cover = *data.cover;
  const LieAlgebra& alg = *data.alg;

  PhiOutput out;
  out.courant.lie.cover = data.cover;
  out.courant.lie.alg = data.alg;
  out.courant.lie.theta = data.theta;
  out.courant.B = data.B;

  for (const Overlap* o : cover.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    const GroupMap& g = data.gbar_at(ij);
    Form A_mc = mc_pullback(g, alg, tol);
    out.courant.lie.phi.emplace(ij, -A_mc);
    out.courant.lie.tau.emplace(ij, TauField::ad(g));

    Form theta_i = restrict_to(cover, ij, 0, data.theta[static_cast<size_t>(ij[0])]);
    Form dA_w2 = data.A_at(ij).d() + data.omega2_at(ij);
    out.courant.beta.emplace(ij, canonical_beta(alg, A_mc, theta_i, dA_w2));

    // innerness witness: omega_ij = dA_ij + omega2_ij + (A_mc, theta_i)^K
    Form omega = dA_w2 + wedge_K(A_mc, theta_i, alg);
    out.witnesses.emplace(ij, InnerAuto{g, std::move(omega)});
  }
  return out;
}

std::vector<CheckResult> phi_curvature_check(const StringData& data, const Tolerances& tol,
                                             ExecMode mode) {
  PhiOutput out = phi_object(data, tol);
  std::vector<Form> Hs = string_curvature(data, tol);
  std::vector<Form> Hc = courant_curvature(out.courant);
  std::vector<Check> checks;
  for (size_t i = 0; i < Hs.size(); ++i) {
    checks.push_back({"phi.curvature", data.cover->chart(static_cast<int>(i))->name(),
                      tol.projection, [&, i](std::string& w) {
                        auto r = form_identity(Hs[i], Hc[i], tol.projection, tol.extra_points,
                                               tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});
  }
  return run_checks(checks, mode);
}

std::vector<CourantAuto> phi_1morphism(const StringMorphism& m, const StringData& source,
                                       const StringData& target, const Tolerances& tol) {
  const Cover& cover = *target.cover;
  const LieAlgebra& alg = *target.alg;
  std::vector<CourantAuto> out;
  for (int i = 0; i < cover.chart_count(); ++i) {
    const size_t si = static_cast<size_t>(i);
    Form A_mc = mc_pullback(m.g[si], alg, tol);
    Form dA_w2 = m.A[si].d() + m.omega2[si];
    CourantAuto L{-A_mc, TauField::ad(m.g[si]),
                  canonical_beta(alg, A_mc, target.theta[si], dA_w2)};
    out.push_back(std::move(L));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Abelian edge maps
// ---------------------------------------------------------------------------

std::vector<CheckResult> validate_gerbe(const GerbeData& data, const Tolerances& tol,
                                        ExecMode mode) {
  const Cover& cover = *data.cover;
  std::vector<Check> checks;
  for (const Overlap* o : cover.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    checks.push_back({"gerbe.curving", "U_{" + key_str(ij) + "}", tol.projection,
                      [&, ij](std::string& w) {
                        Form Bi = restrict_to(cover, ij, 0, data.B[static_cast<size_t>(ij[0])]);
                        Form Bj = restrict_to(cover, ij, 1, data.B[static_cast<size_t>(ij[1])]);
                        auto r = form_identity(Bj - Bi, data.A.at(ij).d(), tol.projection,
                                               tol.extra_points, tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});
  }
  FormCochain Ac = FormCochain::zero(cover, 1, 1);
  for (const auto& [ij, a] : data.A) Ac.set(ij, a);
  for (const Overlap* o : cover.of_degree(2)) {
    const std::vector<int>& ijk = o->indices;
    checks.push_back({"gerbe.connection", "U_{" + key_str(ijk) + "}", tol.identity,
                      [&, ijk, Ac](std::string& w) {
                        Form lhs = cech_delta(Ac).at(ijk) + dlog(data.a).at(ijk);
                        auto r = form_vanishes(lhs, tol.identity, tol.extra_points, tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});
  }
  if (!cover.of_degree(3).empty()) {
    checks.push_back({"gerbe.cocycle", "quadruple overlaps", tol.mod1, [&](std::string& w) {
                        double r = circle_residual(cech_delta(data.a), tol);
                        w = "worst mod-1 residual " + std::to_string(r);
                        return r;
                      }});
  }
  return run_checks(checks, mode);
}

ExactData phi_u1(const GerbeData& data, const Tolerances& tol) {
  auto checks = validate_gerbe(data, tol, ExecMode::Serial);
  for (const auto& r : checks)
    if (!r.pass)
      throw GlueFailure(r.tag, r.location + ": gerbe descent fails, residual " +
                                   std::to_string(r.residual));
  ExactData out;
  out.cover = data.cover;
  out.B = data.B;
  for (const auto& [ij, a] : data.A) out.curly.emplace(ij, a.d());
  return out;
}

StringData embed_gerbe_in_string(const GerbeData& data, AlgPtr alg, const Tolerances& tol) {
  const Cover& cover = *data.cover;
  std::vector<Form> theta;
  for (int i = 0; i < cover.chart_count(); ++i)
    theta.push_back(lie_zero_form(cover.chart(i), 1, *alg));
  std::map<std::vector<int>, GroupMap> gbar;
  for (const Overlap* o : cover.of_degree(1))
    gbar.emplace(o->indices, GroupMap::identity(o->chart, alg->rep_size()));
  // with delta A = -dlog a, taking f = a makes the built omega1 vanish
  return build_string_data(cover, std::move(alg), std::move(theta), data.B, std::move(gbar),
                           data.A, data.a, tol);
}

LieData phi_spin(const Cover& cover, AlgPtr alg, const std::vector<Form>& theta,
                 const std::map<std::vector<int>, GroupMap>& gbar, const Tolerances& tol) {
  LieData out;
  out.cover = &cover;
  out.alg = alg;
  out.theta = theta;
  for (const auto& [ij, g] : gbar) {
    out.phi.emplace(ij, -mc_pullback(g, *alg, tol));
    out.tau.emplace(ij, TauField::ad(g));
  }
  return out;
}

}  // namespace ck
