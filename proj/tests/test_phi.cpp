#include <doctest.h>

#include <cmath>

#include <courantkit/phi.hpp>

#include "helpers.hpp"

using namespace ck;
using namespace ckt;

namespace {

AlgPtr so3_ptr() {
  static AlgPtr p = std::make_shared<const LieAlgebra>(LieAlgebra::so(3));
  return p;
}

const Cover& cover3() {
  static Cover cover = same_box_cover("p3", {"x0", "x1"}, Box{{-1.0, -1.0}, {1.0, 1.0}}, 3);
  return cover;
}

GroupMap gauge(const ChartPtr& chart, int i) {
  switch (i) {
    case 0:
      return rot3_z(chart, "x0");
    case 1:
      return rot3_x(chart, "x1") * rot3_z(chart, "x0*x1");
    default:
      return rot3_y(chart, "x0 + x1");
  }
}

StringData sample_string_data(const Cover& cover) {
  auto alg = so3_ptr();
  std::vector<Form> theta, B;
  for (int i = 0; i < cover.chart_count(); ++i) {
    const ChartPtr& chart = cover.chart(i);
    GroupMap h = gauge(chart, i);
    Form mu = lie_zero_form(chart, 1, *alg);
    Coeff c = alg->zero_element();
    c[0] = sc(chart, "x1");
    mu.add_term({0}, std::move(c));
    Coeff c2 = alg->zero_element();
    c2[2] = sc(chart, "x0*x0");
    mu.add_term({1}, std::move(c2));
    theta.push_back(-mc_pullback(h, *alg) + adjoint_form(h, *alg, mu));
    B.push_back(scalar_form(chart, 2, {{{0, 1}, "x1 + " + std::to_string(i) + "*x0"}}));
  }
  std::map<std::vector<int>, GroupMap> gbar;
  std::map<std::vector<int>, Form> A;
  for (const Overlap* o : cover.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    gbar.emplace(ij, gauge(o->chart, ij[0]) * gauge(o->chart, ij[1]).inverse());
    A.emplace(ij, scalar_form(o->chart, 1, {{{0}, "x1"}, {{1}, std::to_string(ij[0]) + "*x0"}}));
  }
  return build_string_data(cover, alg, std::move(theta), std::move(B), std::move(gbar),
                           std::move(A), random_circle_cochain(cover, 2, 555));
}

}  // namespace

TEST_CASE("phi object lands in valid courant data with inner transitions") {
  const Cover& cover = cover3();
  auto alg = so3_ptr();
  StringData P = sample_string_data(cover);
  for (const auto& r : validate_string_data(P)) {
    INFO(r.tag << " @ " << r.location << " " << r.witness);
    CHECK(r.pass);
  }

  PhiOutput out = phi_object(P);
  for (const auto& r : validate_courant_data(out.courant)) {
    INFO(r.tag << " @ " << r.location << " " << r.witness);
    CHECK(r.pass);
  }

  // composition law on the triple overlap, entrywise
  const Overlap* t = cover.of_degree(2).front();
  std::vector<int> ij = {t->indices[0], t->indices[1]};
  std::vector<int> ik = {t->indices[0], t->indices[2]};
  std::vector<int> jk = {t->indices[1], t->indices[2]};
  CourantAuto Lij = out.courant.transition(ij).pulled_back(t->faces[2], *alg);
  CourantAuto Lik = out.courant.transition(ik).pulled_back(t->faces[1], *alg);
  CourantAuto Ljk = out.courant.transition(jk).pulled_back(t->faces[0], *alg);
  auto comp = auto_identity(*alg, auto_compose(*alg, Lij, Ljk), Lik, 1e-9);
  INFO(comp.describe());
  CHECK(comp.pass);
  CHECK(comp.worst_residual <= 1e-9);

  // innerness: each witness satisfies the constraint and rebuilds the transition
  for (const auto& [key, witness] : out.witnesses) {
    auto gw = gw_residual(witness, *alg);
    INFO("U_{" << key[0] << "," << key[1] << "} " << gw.describe());
    CHECK(gw.pass);
    CHECK(gw.worst_residual <= 1e-8);
    CourantAuto rebuilt = inner_auto(witness, *alg);
    auto same = auto_identity(*alg, rebuilt, out.courant.transition(key), 1e-8);
    CHECK(same.pass);
  }

  // the symmetric beta part is minus the Maurer-Cartan gram matrix
  for (const auto& [key, witness] : out.witnesses) {
    Form A_mc = mc_pullback(witness.g, *alg);
    auto sym = out.courant.transition(key).beta_sym();
    const ChartPtr& chart = cover.require(key).chart;
    double worst = 0;
    for (int mu = 0; mu < 2; ++mu)
      for (int nu = 0; nu < 2; ++nu) {
        Scalar expect = -(*alg).pairing(A_mc.coeff_at({mu}), A_mc.coeff_at({nu}));
        auto r = identical_on_samples(sym[static_cast<size_t>(mu)][static_cast<size_t>(nu)],
                                      Scalar(chart, expect.expr()), 1e-9);
        worst = std::max(worst, r.worst_residual);
      }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("phi preserves curvature and commutes with the torsor actions") {
  const Cover& cover = cover3();
  StringData P = sample_string_data(cover);
  for (const auto& r : phi_curvature_check(P)) {
    INFO(r.tag << " @ " << r.location << " " << r.witness);
    CHECK(r.pass);
  }

  // acting by a cocycle shifts both curvatures identically
  CircleCochain phi_c = random_circle_cochain(cover, 1, 661);
  FormCochain alpha = random_form_cochain(cover, 0, 1, 662);
  D2Cocycle h = D2Cocycle::coboundary(cover, phi_c, alpha);
  StringData hP = deligne_action(P, h);
  for (const auto& r : phi_curvature_check(hP)) CHECK(r.pass);

  auto H0 = string_curvature(P);
  auto H1 = string_curvature(hP);
  auto C0 = courant_curvature(phi_object(P).courant);
  auto C1 = courant_curvature(phi_object(hP).courant);
  for (size_t i = 0; i < H0.size(); ++i)
    CHECK(form_identity(H1[i] - H0[i], C1[i] - C0[i], 1e-9).pass);
}

TEST_CASE("phi on 1-morphisms: validated image, 2-cells collapse") {
  const Cover& cover = cover3();
  auto alg = so3_ptr();
  StringData P = sample_string_data(cover);

  // identity morphism maps to identity automorphisms
  StringMorphism id = StringMorphism::identity(cover, alg->rep_size());
  auto Lid = phi_1morphism(id, P, P);
  for (const auto& L : Lid) {
    CHECK(form_vanishes(L.phi, 1e-12).pass);
    for (const auto& row : L.beta)
      for (const auto& e : row) CHECK(identical_on_samples(e, Scalar(L.chart(), Expr()), 1e-12).pass);
  }

  // coboundary torsor morphism maps to a validated courant 1-morphism
  CircleCochain phi_c = random_circle_cochain(cover, 1, 771);
  FormCochain alpha = random_form_cochain(cover, 0, 1, 772);
  D2Cocycle h = D2Cocycle::coboundary(cover, phi_c, alpha);
  StringData hP = deligne_action(P, h);
  StringMorphism m = coboundary_morphism(P, phi_c, alpha);
  for (const auto& r : validate_string_1morphism(P, hP, m)) {
    INFO(r.tag << " @ " << r.location << " " << r.witness);
    CHECK(r.pass);
  }
  auto lambda = phi_1morphism(m, P, hP);
  PhiOutput source = phi_object(P);
  PhiOutput target = phi_object(hP);
  for (const auto& r : validate_courant_1morphism(source.courant, target.courant, lambda)) {
    INFO(r.tag << " @ " << r.location << " " << r.witness);
    CHECK(r.pass);
  }

  // 2-isomorphic string morphisms have identical images: the image depends
  // only on (gbar, dA + omega2), and a 2-cell (f, omega1) moves
  // (A, omega2) by (omega1 - dlog f, -d omega1), keeping dA + omega2 fixed.
  StringMorphism m2 = m;
  for (int i = 0; i < cover.chart_count(); ++i) {
    const ChartPtr& chart = cover.chart(i);
    Form w1 = scalar_form(chart, 1, {{{0}, "x1*x0"}});
    Scalar lift = sc(chart, "x0/3");
    Form dlog_f = scalar_form(chart, 1, {{{0}, "1/3"}});
    m2.A[static_cast<size_t>(i)] =
        m2.A[static_cast<size_t>(i)] - dlog_f + w1;
    m2.omega2[static_cast<size_t>(i)] = m2.omega2[static_cast<size_t>(i)] - w1.d();
  }
  auto lambda2 = phi_1morphism(m2, P, hP);
  for (size_t i = 0; i < lambda.size(); ++i) {
    auto same = auto_identity(*alg, lambda[i], lambda2[i], 1e-9);
    INFO(same.describe());
    CHECK(same.pass);
  }
}

TEST_CASE("phi_u1 and the commutative square over gerbe data") {
  const Cover& cover = cover3();
  auto alg = so3_ptr();

  // gerbe: B_i with dA transitions; delta A = -dlog a
  GerbeData G;
  G.cover = &cover;
  for (int i = 0; i < cover.chart_count(); ++i)
    G.B.push_back(scalar_form(cover.chart(i), 2,
                              {{{0, 1}, "x0*x1 + " + std::to_string(2 * i) + "*x0"}}));
  for (const Overlap* o : cover.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    // B_j - B_i = 2(j - i) x0 dx0^dx1 = d( (j-i) x0^2 dx1 )
    G.A.emplace(ij, scalar_form(o->chart, 1,
                                {{{1}, std::to_string(ij[1] - ij[0]) + "*x0^2"}}));
  }
  // delta A at (0,1,2): A_12 - A_02 + A_01 = (1 - 2 + 1) x0^2 dx1 = 0: take a constant
  G.a = CircleCochain::zero(cover, 2);
  for (const Overlap* o : cover.of_degree(2))
    G.a.set(o->indices, Scalar(o->chart, Expr::num(Rational(1, 3))));
  for (const auto& r : validate_gerbe(G)) {
    INFO(r.tag << " @ " << r.location << " " << r.witness);
    CHECK(r.pass);
  }

  ExactData E = phi_u1(G);
  for (const auto& r : validate_exact_data(E)) {
    INFO(r.tag << " @ " << r.location << " " << r.witness);
    CHECK(r.pass);
  }

  // two gerbes differing by a closed connection pattern map to the same
  // exact data: A-shift c_ij dx0 with c_ij = u_j - u_i (delta-closed) and an
  // a-shift by constants
  GerbeData G2 = G;
  const double u[3] = {0.0, 0.0, 0.0};
  (void)u;
  const char* shift_coeff[3][3] = {{nullptr, "1/2", "5/7"}, {nullptr, nullptr, "3/14"},
                                   {nullptr, nullptr, nullptr}};
  for (auto& [ij, a] : G2.A)
    a = a + scalar_form(cover.require(ij).chart, 1,
                        {{{0}, shift_coeff[ij[0]][ij[1]]}});
  for (auto& [ijk, lift] : G2.a.lifts)
    lift = lift + Scalar(cover.require(ijk).chart, Expr::num(Rational(2, 5)));
  for (const auto& r : validate_gerbe(G2)) {
    INFO(r.tag << " @ " << r.location << " " << r.witness);
    CHECK(r.pass);
  }
  ExactData E2 = phi_u1(G2);
  for (size_t i = 0; i < E.B.size(); ++i) CHECK(form_identity(E.B[i], E2.B[i], 1e-12).pass);
  for (const auto& [ij, c] : E.curly) CHECK(form_identity(c, E2.curly.at(ij), 1e-12).pass);

  // commutative square: embed-then-phi equals phi_u1-then-embed
  StringData S = embed_gerbe_in_string(G, alg);
  for (const auto& r : validate_string_data(S)) {
    INFO(r.tag << " @ " << r.location << " " << r.witness);
    CHECK(r.pass);
  }
  PhiOutput via_string = phi_object(S);
  CourantData via_exact = embed_exact_in_transitive(E, alg);
  for (size_t i = 0; i < via_string.courant.B.size(); ++i) {
    CHECK(form_identity(via_string.courant.B[i], via_exact.B[i], 1e-12).pass);
    CHECK(form_vanishes(via_string.courant.lie.theta[i], 1e-12).pass);
  }
  for (const auto& [ij, beta] : via_string.courant.beta) {
    const auto& other = via_exact.beta.at(ij);
    const ChartPtr& chart = cover.require(ij).chart;
    for (size_t mu = 0; mu < beta.size(); ++mu)
      CHECK(coeff_identity(chart, beta[mu], other[mu], 1e-9).pass);
  }

  // lower square: spin projection of phi_object equals phi_spin of projection
  StringData P = sample_string_data(cover);
  SpinData spin = project_string_to_spin(P);
  for (const auto& r : validate_spin_data(cover, *alg, spin.theta, spin.gbar)) CHECK(r.pass);
  LieData via_phi = project_courant_to_lie(phi_object(P).courant);
  LieData via_spin = phi_spin(cover, alg, spin.theta, spin.gbar);
  for (const auto& r : validate_lie_data(via_spin)) {
    INFO(r.tag << " @ " << r.location << " " << r.witness);
    CHECK(r.pass);
  }
  for (size_t i = 0; i < via_phi.theta.size(); ++i)
    CHECK(form_identity(via_phi.theta[i], via_spin.theta[i], 1e-12).pass);
  for (const auto& [ij, f] : via_phi.phi)
    CHECK(form_identity(f, via_spin.phi.at(ij), 1e-12).pass);

  // curvature of the projected data is d theta + 1/2 [theta, theta]
  auto R = curvature_R(via_spin);
  for (size_t i = 0; i < R.size(); ++i)
    CHECK(form_identity(R[i], curvature_form(spin.theta[i], *alg), 1e-12).pass);
}

TEST_CASE("phi naturality under pullback along a chart map") {
  auto alg = so3_ptr();
  const Cover& cover = cover3();
  StringData P = sample_string_data(cover);

  // a second cover whose charts map into the first via t -> (t0 + t1^2/4, t1)
  static Cover cover_src =
      same_box_cover("pb", {"t0", "t1"}, Box{{-0.7, -0.7}, {0.7, 0.7}}, 3);
  auto mk_map = [&](const ChartPtr& src, const ChartPtr& dst) {
    return SmoothMap(src, dst, {sc(src, "t0 + t1^2/4"), sc(src, "t1")});
  };

  // pull back every string field
  StringData Q;
  Q.cover = &cover_src;
  Q.alg = alg;
  for (int i = 0; i < cover_src.chart_count(); ++i) {
    SmoothMap f = mk_map(cover_src.chart(i), cover.chart(i));
    Q.theta.push_back(pullback(f, P.theta[static_cast<size_t>(i)]));
    Q.B.push_back(pullback(f, P.B[static_cast<size_t>(i)]));
  }
  Q.f = CircleCochain::zero(cover_src, 2);
  Q.omega1 = FormCochain::zero(cover_src, 2, 1);
  Q.Fc = CircleCochain::zero(cover_src, 3);
  for (const Overlap* o : cover_src.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    SmoothMap f = mk_map(o->chart, cover.require(ij).chart);
    Q.gbar.emplace(ij, P.gbar_at(ij).pulled_back(f));
    Q.A.emplace(ij, pullback(f, P.A_at(ij)));
    Q.omega2.emplace(ij, pullback(f, P.omega2_at(ij)));
  }
  for (const Overlap* o : cover_src.of_degree(2)) {
    SmoothMap f = mk_map(o->chart, cover.require(o->indices).chart);
    Q.f.set(o->indices, f.pull_scalar(P.f.at(o->indices)));
    Q.omega1.set(o->indices, pullback(f, P.omega1.at(o->indices)));
    Q.Fc = cech_delta(Q.f);
  }
  for (const auto& r : validate_string_data(Q)) {
    INFO(r.tag << " @ " << r.location << " " << r.witness);
    CHECK(r.pass);
  }

  // phi after pullback equals pullback after phi, field by field
  PhiOutput phiQ = phi_object(Q);
  PhiOutput phiP = phi_object(P);
  for (const Overlap* o : cover_src.of_degree(1)) {
    const std::vector<int>& ij = o->indices;
    SmoothMap f = mk_map(o->chart, cover.require(ij).chart);
    CourantAuto pulled = phiP.courant.transition(ij).pulled_back(f, *alg);
    auto r = auto_identity(*alg, phiQ.courant.transition(ij), pulled, 1e-9);
    INFO("U_{" << ij[0] << "," << ij[1] << "} " << r.describe());
    CHECK(r.pass);
  }
}
