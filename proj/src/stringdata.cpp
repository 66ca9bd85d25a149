#include "courantkit/stringdata.hpp"

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

void append(std::vector<CheckResult>& out, std::vector<CheckResult>&& more) {
  for (auto& r : more) out.push_back(std::move(r));
}

}  // namespace

const GroupMap& StringData::gbar_at(const std::vector<int>& ij) const {
  auto it = gbar.find(ij);
  if (it == gbar.end()) throw MissingOverlap("gbar on U_{" + key_str(ij) + "}");
  return it->second;
}
const Form& StringData::A_at(const std::vector<int>& ij) const {
  auto it = A.find(ij);
  if (it == A.end()) throw MissingOverlap("A on U_{" + key_str(ij) + "}");
  return it->second;
}
const Form& StringData::omega2_at(const std::vector<int>& ij) const {
  auto it = omega2.find(ij);
  if (it == omega2.end()) throw MissingOverlap("omega2 on U_{" + key_str(ij) + "}");
  return it->second;
}

// ---------------------------------------------------------------------------
// D2 cocycles
// ---------------------------------------------------------------------------

DeligneCochain D2Cocycle::as_deligne(const Cover& cover) const {
  DeligneCochain x = DeligneCochain::zero(cover, 2, 2);
  x.circle = f;
  x.forms[0] = A;
  x.forms[1] = B;
  return x;
}

D2Cocycle D2Cocycle::zero(const Cover& cover) {
  return D2Cocycle{CircleCochain::zero(cover, 2), FormCochain::zero(cover, 1, 1),
                   FormCochain::zero(cover, 0, 2)};
}

D2Cocycle D2Cocycle::coboundary(const Cover& cover, const CircleCochain& phi,
                                const FormCochain& alpha) {
  DeligneCochain x = DeligneCochain::zero(cover, 1, 2);
  x.circle = phi;
  x.forms[0] = alpha;
  DeligneCochain dx = deligne_D(x);
  return D2Cocycle{dx.circle, dx.forms[0], dx.forms[1]};
}

D2Cocycle operator+(const D2Cocycle& a, const D2Cocycle& b) {
  return D2Cocycle{a.f + b.f, a.A + b.A, a.B + b.B};
}

std::vector<CheckResult> validate_d2_cocycle(const D2Cocycle& h, const Cover& cover,
                                             const Tolerances& tol, ExecMode mode) {
  return deligne_cocycle_check(h.as_deligne(cover), tol, mode);
}

// ---------------------------------------------------------------------------
// String data validation
// ---------------------------------------------------------------------------

std::vector<CheckResult> validate_spin_data(const Cover& cover, const LieAlgebra& alg,
                                            const std::vector<Form>& theta,
                                            const std::map<std::vector<int>, GroupMap>& gbar,
                                            const Tolerances& tol, ExecMode mode) {
  std::vector<Check> checks;
  for (const Overlap* o : cover.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    const std::string loc = "U_{" + key_str(ij) + "}";
    const GroupMap& g = gbar.at(ij);

    for (const auto& gr : g.validate(tol.projection))
      checks.push_back({gr.tag, loc, gr.tol, [gr](std::string& w) {
                          w = gr.witness;
                          return gr.residual;
                        }});

    checks.push_back(
        {"spin.mc-transition", loc, tol.projection, [&, ij, &g](std::string& w) {
           const LieAlgebra& a = alg;
           Form ti = restrict_to(cover, ij, 0, theta[static_cast<size_t>(ij[0])]);
           Form tj = restrict_to(cover, ij, 1, theta[static_cast<size_t>(ij[1])]);
           Form lhs = ti - adjoint_form(g, a, tj, tol);
           Form rhs = -mc_pullback(g, a, tol);
           auto r = form_identity(lhs, rhs, tol.projection, tol.extra_points, tol.seed);
           w = r.describe();
           return r.worst_residual;
         }});
  }
  for (const Overlap* o : cover.of_degree(2)) {
    const std::vector<int>& ijk = o->indices;
    checks.push_back(
        {"spin.cocycle", "U_{" + key_str(ijk) + "}", tol.projection, [&, o, ijk](std::string& w) {
           std::vector<int> ij = {ijk[0], ijk[1]};
           std::vector<int> ik = {ijk[0], ijk[2]};
           std::vector<int> jk = {ijk[1], ijk[2]};
           GroupMap gij = gbar.at(ij).pulled_back(o->faces[2]);
           GroupMap gik = gbar.at(ik).pulled_back(o->faces[1]);
           GroupMap gjk = gbar.at(jk).pulled_back(o->faces[0]);
           GroupMap prod = gij * gjk;
           double worst = 0;
           for (const auto& p : o->chart->eval_points(tol.extra_points, tol.seed))
             for (int r = 0; r < prod.size(); ++r)
               for (int c = 0; c < prod.size(); ++c)
                 worst = std::max(worst, std::abs(prod.entry(r, c).eval(p) -
                                                  gik.entry(r, c).eval(p)));
           w = "max entry deviation " + std::to_string(worst);
           return worst;
         }});
  }
  return run_checks(checks, mode);
}

std::vector<CheckResult> validate_string_data(const StringData& data, const Tolerances& tol,
                                              ExecMode mode) {
  const Cover& cover = *data.cover;
  const LieAlgebra& alg = *data.alg;
  std::vector<CheckResult> out =
      validate_spin_data(cover, alg, data.theta, data.gbar, tol, mode);

  std::vector<Check> checks;
  for (const Overlap* o : cover.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    const std::string loc = "U_{" + key_str(ij) + "}";

    checks.push_back({"string.curving", loc, tol.projection, [&, ij](std::string& w) {
                        Form Bi = restrict_to(cover, ij, 0, data.B[static_cast<size_t>(ij[0])]);
                        Form Bj = restrict_to(cover, ij, 1, data.B[static_cast<size_t>(ij[1])]);
                        Form rhs = data.A_at(ij).d() + data.omega2_at(ij);
                        auto r = form_identity(Bj - Bi, rhs, tol.projection, tol.extra_points,
                                               tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});

    checks.push_back({"string.cs3-descent", loc, tol.projection, [&, ij](std::string& w) {
                        Form ci = cs3(data.theta[static_cast<size_t>(ij[0])], alg);
                        Form cj = cs3(data.theta[static_cast<size_t>(ij[1])], alg);
                        Form lhs = restrict_to(cover, ij, 1, cj) - restrict_to(cover, ij, 0, ci);
                        auto r = form_identity(lhs, data.omega2_at(ij).d(), tol.projection,
                                               tol.extra_points, tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});
  }

  // triple-level connection and curving descent
  for (const Overlap* o : cover.of_degree(2)) {
    const std::vector<int>& ijk = o->indices;
    const std::string loc = "U_{" + key_str(ijk) + "}";
    checks.push_back(
        {"string.connection-descent", loc, tol.identity, [&, o, ijk](std::string& w) {
           // (delta A)_{ijk} - omega1_{ijk} + dlog f_{ijk} = 0, comparing forms
           std::vector<int> ij = {ijk[0], ijk[1]};
           std::vector<int> ik = {ijk[0], ijk[2]};
           std::vector<int> jk = {ijk[1], ijk[2]};
           Form dA = pullback(o->faces[0], data.A_at(jk)) -
                     pullback(o->faces[1], data.A_at(ik)) +
                     pullback(o->faces[2], data.A_at(ij));
           Form fl = dlog(data.f).at(ijk);
           Form lhs = dA - data.omega1.at(ijk) + fl;
           auto r = form_vanishes(lhs, tol.identity, tol.extra_points, tol.seed);
           w = r.describe();
           return r.worst_residual;
         }});
    checks.push_back(
        {"string.curving-descent", loc, tol.identity, [&, o, ijk](std::string& w) {
           std::vector<int> ij = {ijk[0], ijk[1]};
           std::vector<int> ik = {ijk[0], ijk[2]};
           std::vector<int> jk = {ijk[1], ijk[2]};
           Form dw = pullback(o->faces[0], data.omega2_at(jk)) -
                     pullback(o->faces[1], data.omega2_at(ik)) +
                     pullback(o->faces[2], data.omega2_at(ij));
           auto r = form_identity(dw, -data.omega1.at(ijk).d(), tol.identity, tol.extra_points,
                                  tol.seed);
           w = r.describe();
           return r.worst_residual;
         }});
  }

  // quadruple level: delta f = F mod 1
  if (!cover.of_degree(3).empty()) {
    checks.push_back({"string.f-cocycle", "quadruple overlaps", tol.mod1,
                      [&](std::string& w) {
                        CircleCochain df = cech_delta(data.f);
                        double r = circle_cochain_residual(df, data.Fc, tol);
                        w = "worst mod-1 residual " + std::to_string(r);
                        return r;
                      }});
  }

  append(out, run_checks(checks, mode));
  return out;
}

std::vector<Form> string_curvature(const StringData& data, const Tolerances& tol) {
  const Cover& cover = *data.cover;
  const LieAlgebra& alg = *data.alg;
  std::vector<Form> H;
  H.reserve(data.theta.size());
  for (size_t i = 0; i < data.theta.size(); ++i)
    H.push_back(cs3(data.theta[i], alg) - data.B[i].d());
  for (const Overlap* o : cover.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    Form Hi = restrict_to(cover, ij, 0, H[static_cast<size_t>(ij[0])]);
    Form Hj = restrict_to(cover, ij, 1, H[static_cast<size_t>(ij[1])]);
    auto r = form_identity(Hi, Hj, tol.projection, tol.extra_points, tol.seed);
    if (!r.pass)
      throw GlueFailure("string-curvature",
                        "cs3 - dB mismatch on U_{" + key_str(ij) + "}: " + r.describe());
  }
  return H;
}

// ---------------------------------------------------------------------------
// Torsor action and morphisms
// ---------------------------------------------------------------------------

StringData deligne_action(const StringData& data, const D2Cocycle& h) {
  StringData out = data;
  for (size_t i = 0; i < out.B.size(); ++i)
    out.B[i] = out.B[i] + h.B.at({static_cast<int>(i)});
  for (auto& [ij, a] : out.A) a = a + h.A.at(ij);
  out.f = out.f + h.f;
  return out;
}

StringMorphism StringMorphism::identity(const Cover& cover, int rep_size) {
  StringMorphism m;
  for (int i = 0; i < cover.chart_count(); ++i) {
    m.g.push_back(GroupMap::identity(cover.chart(i), rep_size));
    m.A.push_back(Form::scalar_zero(cover.chart(i), 1));
    m.omega2.push_back(Form::scalar_zero(cover.chart(i), 2));
  }
  m.f = CircleCochain::zero(cover, 1);
  m.omega1 = FormCochain::zero(cover, 1, 1);
  return m;
}

StringMorphism coboundary_morphism(const StringData& data, const CircleCochain& phi,
                                   const FormCochain& alpha) {
  const Cover& cover = *data.cover;
  StringMorphism m = StringMorphism::identity(cover, data.alg->rep_size());
  for (int i = 0; i < cover.chart_count(); ++i)
    m.A[static_cast<size_t>(i)] = -alpha.at({i});
  m.f = phi;
  return m;
}

std::vector<CheckResult> validate_string_1morphism(const StringData& source,
                                                   const StringData& target,
                                                   const StringMorphism& m,
                                                   const Tolerances& tol, ExecMode mode) {
  const Cover& cover = *target.cover;
  const LieAlgebra& alg = *target.alg;
  std::vector<Check> checks;

  for (int i = 0; i < cover.chart_count(); ++i) {
    const std::string loc = cover.chart(i)->name();
    const size_t si = static_cast<size_t>(i);

    checks.push_back({"string-morphism.curving", loc, tol.projection, [&, si](std::string& w) {
                        Form lhs = source.B[si] - target.B[si];
                        Form rhs = m.omega2[si] + m.A[si].d();
                        auto r = form_identity(lhs, rhs, tol.projection, tol.extra_points,
                                               tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});

    checks.push_back({"string-morphism.cs3", loc, tol.projection, [&, si](std::string& w) {
                        Form lhs = m.omega2[si].d();
                        Form rhs = cs3(source.theta[si], alg) - cs3(target.theta[si], alg);
                        auto r = form_identity(lhs, rhs, tol.projection, tol.extra_points,
                                               tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});

    checks.push_back({"string-morphism.mc", loc, tol.projection, [&, si](std::string& w) {
                        Form lhs = target.theta[si] -
                                   adjoint_form(m.g[si], alg, source.theta[si], tol);
                        Form rhs = -mc_pullback(m.g[si], alg, tol);
                        auto r = form_identity(lhs, rhs, tol.projection, tol.extra_points,
                                               tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});
  }

  for (const Overlap* o : cover.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    const std::string loc = "U_{" + key_str(ij) + "}";

    checks.push_back(
        {"string-morphism.connection", loc, tol.identity, [&, o, ij](std::string& w) {
           // A_ij + A_j - (A_i + A~_ij) = omega1_ij - dlog f_ij
           Form Aj = pullback(o->faces[0], m.A[static_cast<size_t>(ij[1])]);
           Form Ai = pullback(o->faces[1], m.A[static_cast<size_t>(ij[0])]);
           Form lhs = target.A_at(ij) + Aj - Ai - source.A_at(ij);
           Form rhs = m.omega1.at(ij) - dlog(m.f).at(ij);
           auto r = form_identity(lhs, rhs, tol.identity, tol.extra_points, tol.seed);
           w = r.describe();
           return r.worst_residual;
         }});

    checks.push_back(
        {"string-morphism.curving-pair", loc, tol.identity, [&, o, ij](std::string& w) {
           Form wj = pullback(o->faces[0], m.omega2[static_cast<size_t>(ij[1])]);
           Form wi = pullback(o->faces[1], m.omega2[static_cast<size_t>(ij[0])]);
           Form lhs = target.omega2_at(ij) + wj - source.omega2_at(ij) - wi;
           auto r = form_identity(lhs, -m.omega1.at(ij).d(), tol.identity, tol.extra_points,
                                  tol.seed);
           w = r.describe();
           return r.worst_residual;
         }});

    checks.push_back(
        {"string-morphism.g-square", loc, tol.projection, [&, o, ij](std::string& w) {
           GroupMap gj = m.g[static_cast<size_t>(ij[1])].pulled_back(o->faces[0]);
           GroupMap gi = m.g[static_cast<size_t>(ij[0])].pulled_back(o->faces[1]);
           GroupMap lhs = target.gbar_at(ij) * gj;
           GroupMap rhs = gi * source.gbar_at(ij);
           double worst = 0;
           for (const auto& p : o->chart->eval_points(tol.extra_points, tol.seed))
             for (int r = 0; r < lhs.size(); ++r)
               for (int c = 0; c < lhs.size(); ++c)
                 worst = std::max(worst,
                                  std::abs(lhs.entry(r, c).eval(p) - rhs.entry(r, c).eval(p)));
           w = "max entry deviation " + std::to_string(worst);
           return worst;
         }});
  }

  // triple coherence: f_ijk - f~_ijk = (delta f_..)_ijk mod 1
  for (const Overlap* o : cover.of_degree(2)) {
    const std::vector<int>& ijk = o->indices;
    checks.push_back({"string-morphism.f-coherence", "U_{" + key_str(ijk) + "}", tol.mod1,
                      [&, ijk](std::string& w) {
                        CircleCochain lhs = target.f - source.f;
                        CircleCochain rhs = cech_delta(m.f);
                        // compare only on this triple
                        CircleCochain l1 = CircleCochain::zero(*target.cover, 2);
                        l1.set(ijk, lhs.at(ijk));
                        CircleCochain r1 = CircleCochain::zero(*target.cover, 2);
                        r1.set(ijk, rhs.at(ijk));
                        double res = circle_cochain_residual(l1, r1, tol);
                        w = "mod-1 residual " + std::to_string(res);
                        return res;
                      }});
  }

  return run_checks(checks, mode);
}

std::vector<CheckResult> check_iso_condition(const D2Cocycle& h, const StringData& data,
                                             const StringMorphism& m, const Tolerances& tol,
                                             ExecMode mode) {
  const Cover& cover = *data.cover;
  std::vector<Check> checks;
  for (int i = 0; i < cover.chart_count(); ++i) {
    const size_t si = static_cast<size_t>(i);
    const std::string loc = cover.chart(i)->name();
    checks.push_back({"iso.curving", loc, tol.projection, [&, si, i](std::string& w) {
                        Form rhs = m.omega2[si] + m.A[si].d();
                        auto r = form_identity(h.B.at({i}), rhs, tol.projection,
                                               tol.extra_points, tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});
    checks.push_back({"iso.curving-closed", loc, tol.projection, [&, si](std::string& w) {
                        auto r = form_vanishes(m.omega2[si].d(), tol.projection,
                                               tol.extra_points, tol.seed);
                        w = r.describe();
                        return r.worst_residual;
                      }});
  }
  for (const Overlap* o : cover.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    checks.push_back(
        {"iso.connection", "U_{" + key_str(ij) + "}", tol.identity, [&, o, ij](std::string& w) {
           Form Aj = pullback(o->faces[0], m.A[static_cast<size_t>(ij[1])]);
           Form Ai = pullback(o->faces[1], m.A[static_cast<size_t>(ij[0])]);
           Form rhs = Aj - Ai - m.omega1.at(ij) + dlog(m.f).at(ij);
           auto r = form_identity(h.A.at(ij), rhs, tol.identity, tol.extra_points, tol.seed);
           w = r.describe();
           return r.worst_residual;
         }});
  }
  for (const Overlap* o : cover.of_degree(2)) {
    const std::vector<int>& ijk = o->indices;
    checks.push_back({"iso.f", "U_{" + key_str(ijk) + "}", tol.mod1, [&, ijk](std::string& w) {
                        CircleCochain df = cech_delta(m.f);
                        CircleCochain lhs = CircleCochain::zero(*data.cover, 2);
                        lhs.set(ijk, df.at(ijk) + h.f.at(ijk));
                        double res = circle_residual(lhs, tol);
                        w = "mod-1 residual " + std::to_string(res);
                        return res;
                      }});
  }
  return run_checks(checks, mode);
}

// ---------------------------------------------------------------------------
// Generator
// ---------------------------------------------------------------------------

StringData build_string_data(const Cover& cover, AlgPtr alg, std::vector<Form> theta,
                             std::vector<Form> B, std::map<std::vector<int>, GroupMap> gbar,
                             std::map<std::vector<int>, Form> A, CircleCochain f,
                             const Tolerances& tol) {
  StringData out;
  out.cover = &cover;
  out.alg = std::move(alg);
  out.theta = std::move(theta);
  out.B = std::move(B);
  out.gbar = std::move(gbar);
  out.A = std::move(A);
  out.f = std::move(f);

  // omega2_ij := (B_j - B_i) - dA_ij
  for (const Overlap* o : cover.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    Form Bi = restrict_to(cover, ij, 0, out.B[static_cast<size_t>(ij[0])]);
    Form Bj = restrict_to(cover, ij, 1, out.B[static_cast<size_t>(ij[1])]);
    out.omega2.emplace(ij, Bj - Bi - out.A_at(ij).d());
  }

  // omega1_ijk := (delta A)_ijk + dlog f_ijk
  out.omega1 = FormCochain::zero(cover, 2, 1);
  FormCochain Ac = FormCochain::zero(cover, 1, 1);
  for (const auto& [ij, a] : out.A) Ac.set(ij, a);
  FormCochain dA = cech_delta(Ac);
  FormCochain fl = dlog(out.f);
  for (const Overlap* o : cover.of_degree(2)) {
    out.omega1.set(o->indices, dA.at(o->indices) + fl.at(o->indices));
  }

  // F := delta f
  out.Fc = cech_delta(out.f);
  (void)tol;
  return out;
}

SpinData project_string_to_spin(const StringData& data) {
  return SpinData{data.theta, data.gbar};
}

}  // namespace ck
