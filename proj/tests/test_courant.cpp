#include <doctest.h>

#include <cmath>

#include <courantkit/courant.hpp>

#include "helpers.hpp"

using namespace ck;
using namespace ckt;

namespace {

AlgPtr so3_ptr() {
  static AlgPtr p = std::make_shared<const LieAlgebra>(LieAlgebra::so(3));
  return p;
}

// Independent route for the g-free standard bracket: the Dorfman formula
// [X,Y] + L_X eta - i_Y d xi written without the transitive machinery.
Section dorfman_oracle(const LieAlgebra& alg, const Section& e1, const Section& e2) {
  return Section{vf_bracket(e1.X, e2.X), alg.zero_element(),
                 e2.xi.lie_derivative(e1.X) - e1.xi.d().interior(e2.X)};
}

}  // namespace

TEST_CASE("standard bracket special values") {
  auto c3 = chart_r3();
  auto alg = so3_ptr();

  // constant algebra parts: only [a,b] survives
  Section e1 = Section::zero(c3, *alg);
  Section e2 = Section::zero(c3, *alg);
  e1.a = {Scalar::constant(1), Scalar::constant(2), Scalar::constant(0)};
  e2.a = {Scalar::constant(0), Scalar::constant(1), Scalar::constant(3)};
  Section br = bracket_standard(*alg, e1, e2);
  CHECK(coeff_identity(c3, br.a, alg->bracket(e1.a, e2.a), 1e-12).pass);
  CHECK(form_vanishes(br.xi, 1e-12).pass);
  for (const auto& comp : br.X.components()) CHECK(comp.is_zero());

  // coordinate fields commute
  Section f1 = Section::zero(c3, *alg);
  f1.X = VecField::coordinate(c3, 0);
  Section f2 = Section::zero(c3, *alg);
  f2.X = VecField::coordinate(c3, 1);
  Section brf = bracket_standard(*alg, f1, f2);
  CHECK(coeff_identity(c3, brf.X.components(), VecField::zero(c3).components(), 1e-12).pass);

  // g-free sections reduce to the Dorfman bracket
  auto pool = generate_test_sections(c3, *alg, 77);
  for (size_t i = 0; i + 1 < pool.size(); i += 2) {
    Section a = pool[i], b = pool[i + 1];
    a.a = alg->zero_element();
    b.a = alg->zero_element();
    Section lhs = bracket_standard(*alg, a, b);
    Section rhs = dorfman_oracle(*alg, a, b);
    CHECK(form_identity(lhs.xi, rhs.xi, 1e-9).pass);
    CHECK(coeff_identity(c3, lhs.X.components(), rhs.X.components(), 1e-9).pass);
  }
}

TEST_CASE("pairing values") {
  auto c3 = chart_r3();
  auto alg = so3_ptr();

  Section e = Section::zero(c3, *alg);
  e.X = VecField::coordinate(c3, 0);
  Form dx0 = scalar_form(c3, 1, {{{0}, "1"}});
  Section f = Section::zero(c3, *alg);
  f.xi = dx0;
  CHECK(pairing(*alg, e, f).eval(c3->samples()[0]) == doctest::Approx(0.5));

  Section a = Section::zero(c3, *alg);
  a.a = {sc(c3, "x0"), sc(c3, "1"), sc(c3, "x1")};
  CHECK(identical_on_samples(pairing(*alg, a, a), alg->pairing(a.a, a.a), 1e-12).pass);

  // e = d0 + e01 + dx0 on so(3): <e,e> = 1 + K_11 = 2
  Section full = Section::zero(c3, *alg);
  full.X = VecField::coordinate(c3, 0);
  full.a = alg->basis_element(0);
  full.xi = dx0;
  CHECK(pairing(*alg, full, full).eval(c3->samples()[0]) == doctest::Approx(2.0));
}

TEST_CASE("general bracket reduces and twists") {
  auto c3 = chart_r3();
  auto alg = so3_ptr();
  CourantParams std_params = CourantParams::standard(c3, alg);

  auto pool = generate_test_sections(c3, *alg, 11);
  for (size_t i = 0; i + 1 < pool.size(); i += 3) {
    Section lhs = bracket_general(std_params, pool[i], pool[i + 1]);
    Section rhs = bracket_standard(*alg, pool[i], pool[i + 1]);
    CHECK(coeff_identity(c3, lhs.a, rhs.a, 1e-9).pass);
    CHECK(form_identity(lhs.xi, rhs.xi, 1e-9).pass);
  }

  // H-only twist on g-free sections matches the twisted Dorfman bracket
  CourantParams h_params = CourantParams::standard(c3, alg);
  h_params.H = scalar_form(c3, 3, {{{0, 1, 2}, "1 + x0"}});
  for (size_t i = 0; i + 1 < pool.size(); i += 3) {
    Section a = pool[i], b = pool[i + 1];
    a.a = alg->zero_element();
    b.a = alg->zero_element();
    Section lhs = bracket_general(h_params, a, b);
    Section rhs = dorfman_oracle(*alg, a, b);
    rhs.xi = rhs.xi + h_params.H.interior(a.X).interior(b.X);
    CHECK(form_identity(lhs.xi, rhs.xi, 1e-9).pass);
  }
}

TEST_CASE("courant axioms: standard, general, and a corrupted twist") {
  auto c3 = chart_r3();
  auto alg = so3_ptr();
  auto pool = generate_test_sections(c3, *alg, kDefaultSeed);

  auto std_bracket = [&](const Section& a, const Section& b) {
    return bracket_standard(*alg, a, b);
  };
  auto results = check_courant_axioms(*alg, std_bracket, pool, 8);
  for (const auto& r : results) {
    INFO(r.tag << " @ " << r.location << " " << r.witness);
    CHECK(r.pass);
  }

  // valid general params on a 4-chart: R from theta, H = cs3(theta) + closed
  auto c4 = chart_r4();
  Form theta = lie_one_form(
      c4, *alg, {{"x1", "", ""}, {"", "x3", ""}, {"", "", "x0*x3"}, {"x2", "", ""}});
  CourantParams p{alg, theta, curvature_form(theta, *alg),
                  cs3(theta, *alg) + scalar_form(c4, 3, {{{0, 1, 2}, "2"}})};
  for (const auto& r : p.validate()) {
    INFO(r.tag << " " << r.witness);
    CHECK(r.pass);
  }
  auto pool4 = generate_test_sections(c4, *alg, kDefaultSeed);
  auto gen_bracket = [&](const Section& a, const Section& b) { return bracket_general(p, a, b); };
  auto gen_results = check_courant_axioms(*alg, gen_bracket, pool4, 5);
  for (const auto& r : gen_results) {
    INFO(r.tag << " @ " << r.location << " " << r.witness);
    CHECK(r.pass);
  }

  // corrupted twist: dH != (R,R) must break the Leibniz identity visibly
  CourantParams bad = p;
  bad.H = bad.H + scalar_form(c4, 3, {{{0, 1, 2}, "x3"}});
  auto bad_bracket = [&](const Section& a, const Section& b) {
    return bracket_general(bad, a, b);
  };
  // coordinate-field triple: the twist anomaly contracts to a visible 1-form
  Section t1 = Section::zero(c4, *alg);
  t1.X = VecField::coordinate(c4, 0);
  Section t2 = Section::zero(c4, *alg);
  t2.X = VecField::coordinate(c4, 1);
  Section t3 = Section::zero(c4, *alg);
  t3.X = VecField::coordinate(c4, 2);
  Section lhs = bad_bracket(t1, bad_bracket(t2, t3));
  Section rhs = bad_bracket(bad_bracket(t1, t2), t3) + bad_bracket(t2, bad_bracket(t1, t3));
  auto leib = form_identity(lhs.xi, rhs.xi, 1e-9);
  CHECK(!leib.pass);
  CHECK(leib.worst_residual > 1e-3);
  // the same triple under the valid params stays clean
  auto good = form_identity(bracket_general(p, t1, bracket_general(p, t2, t3)).xi,
                            (bracket_general(p, bracket_general(p, t1, t2), t3) +
                             bracket_general(p, t2, bracket_general(p, t1, t3)))
                                .xi,
                            1e-9);
  CHECK(good.pass);
}

TEST_CASE("automorphisms: identity, B-field, validation") {
  auto c3 = chart_r3();
  auto alg = so3_ptr();

  CourantAuto id = CourantAuto::identity(c3, *alg);
  auto pool = generate_test_sections(c3, *alg, 5);
  Section e = pool.back();
  Section ide = auto_apply(*alg, id, e);
  CHECK(coeff_identity(c3, ide.a, e.a, 1e-12).pass);
  CHECK(form_identity(ide.xi, e.xi, 1e-12).pass);
  for (const auto& r : auto_validate(*alg, id, Tolerances{}, ExecMode::Serial, 4)) {
    INFO(r.tag << " " << r.witness);
    CHECK(r.pass);
  }

  // pure B-field: beta antisymmetric closed, phi = 0, tau = id
  CourantAuto bf = CourantAuto::identity(c3, *alg);
  Form B = scalar_form(c3, 2, {{{0, 1}, "x2"}, {{0, 2}, "x1"}});  // d(x2 dx01) = -d(x1 dx02)
  CHECK(form_vanishes(B.d(), 1e-12).pass);
  for (int mu = 0; mu < 3; ++mu)
    for (int nu = 0; nu < 3; ++nu) {
      std::vector<VecField> mn{VecField::coordinate(c3, mu), VecField::coordinate(c3, nu)};
      bf.beta[static_cast<size_t>(mu)][static_cast<size_t>(nu)] = B.eval_on(mn)[0];
    }
  for (const auto& r : auto_validate(*alg, bf, Tolerances{}, ExecMode::Serial, 4)) {
    INFO(r.tag << " " << r.witness);
    CHECK(r.pass);
  }
  // X-part picks up i_X B
  Section x = Section::zero(c3, *alg);
  x.X = VecField::coordinate(c3, 0);
  Section bx = auto_apply(*alg, bf, x);
  CHECK(form_identity(bx.xi, B.interior(x.X), 1e-12).pass);
}

TEST_CASE("inner automorphisms validate and compose by the group law") {
  auto c2 = chart_r2();
  auto alg = so3_ptr();

  // on a 2-chart every 3-form vanishes, so any closed omega satisfies the constraint
  GroupMap g1 = rot3_z(c2, "x0") * rot3_x(c2, "x1");
  Form w1 = scalar_form(c2, 2, {{{0, 1}, "x0"}});  // top degree: closed
  InnerAuto in1{g1, w1};
  CHECK(gw_residual(in1, *alg).pass);
  CourantAuto L1 = inner_auto(in1, *alg);
  for (const auto& r : auto_validate(*alg, L1, Tolerances{}, ExecMode::Serial, 6)) {
    INFO(r.tag << " " << r.witness);
    CHECK(r.pass);
  }

  GroupMap g2 = rot3_y(c2, "x0*x1");
  InnerAuto in2{g2, scalar_form(c2, 2, {{{0, 1}, "x1 - x0"}})};
  CourantAuto L2 = inner_auto(in2, *alg);

  // group law matches matrix composition entrywise
  CourantAuto matrix_side = auto_compose(*alg, L1, L2);
  CourantAuto pair_side = inner_auto(inner_compose(in1, in2, *alg), *alg);
  CHECK(auto_identity(*alg, matrix_side, pair_side, 1e-9).pass);

  // inverse pair composes to the identity automorphism
  CourantAuto inv = inner_auto(inner_inverse(in1, *alg), *alg);
  CourantAuto idc = auto_compose(*alg, L1, inv);
  CHECK(auto_identity(*alg, idc, CourantAuto::identity(c2, *alg), 1e-9).pass);

  // apply then apply-inverse returns the section
  auto pool = generate_test_sections(c2, *alg, 3);
  Section e = pool.front();
  Section round = auto_apply(*alg, auto_inverse(*alg, L1), auto_apply(*alg, L1, e));
  CHECK(coeff_identity(c2, round.a, e.a, 1e-9).pass);
  CHECK(form_identity(round.xi, e.xi, 1e-9).pass);

  // associativity of composition on three automorphisms
  CourantAuto ab_c = auto_compose(*alg, auto_compose(*alg, L1, L2), inv);
  CourantAuto a_bc = auto_compose(*alg, L1, auto_compose(*alg, L2, inv));
  CHECK(auto_identity(*alg, ab_c, a_bc, 1e-9).pass);
}

TEST_CASE("negative control: beta missing the symmetric correction") {
  auto c2 = chart_r2();
  auto alg = so3_ptr();
  GroupMap g = rot3_z(c2, "x0") * rot3_x(c2, "x1");
  InnerAuto in{g, scalar_form(c2, 2, {{{0, 1}, "x0"}})};
  CourantAuto L = inner_auto(in, *alg);
  // drop the symmetric -(A_mu, A_nu) part: keep only the omega antisymmetric piece
  Form A = mc_pullback(g, *alg);
  for (int mu = 0; mu < 2; ++mu)
    for (int nu = 0; nu < 2; ++nu)
      L.beta[static_cast<size_t>(mu)][static_cast<size_t>(nu)] =
          L.beta[static_cast<size_t>(mu)][static_cast<size_t>(nu)] +
          alg->pairing(A.coeff_at({mu}), A.coeff_at({nu}));
  double worst_sym = 0;
  for (const auto& r : auto_validate(*alg, L, Tolerances{}, ExecMode::Serial, 4))
    if (r.tag == "auto.symmetric-part") worst_sym = std::max(worst_sym, r.residual);
  CHECK(worst_sym > 1e-3);
  // the defect shows up directly as a pairing violation on X-bearing sections
  Section u = Section::zero(c2, *alg);
  u.X = VecField::coordinate(c2, 0);
  auto pres = identical_on_samples(pairing(*alg, auto_apply(*alg, L, u), auto_apply(*alg, L, u)),
                                   pairing(*alg, u, u), 1e-9);
  CHECK(!pres.pass);
  CHECK(pres.worst_residual > 1e-4);

  // GW violation: non-closed omega on a 3-chart with an abelian-image map
  auto c3 = chart_r3();
  GroupMap gz = rot3_z(c3, "x0");
  Form bad_omega = scalar_form(c3, 2, {{{0, 1}, "x2"}});  // d != 0 but cartan3 = 0
  CHECK_THROWS_AS(inner_auto(InnerAuto{gz, bad_omega}, *alg), GWViolation);
}

TEST_CASE("action courant bracket") {
  auto c3 = chart_r3();

  // rho = 0: bracket reduces to the pointwise algebra bracket
  {
    auto so3 = so3_ptr();
    ActionStructure act{so3, {VecField::zero(c3), VecField::zero(c3), VecField::zero(c3)}};
    act.check_action_property();
    Coeff s1 = {Scalar::constant(1), Scalar::constant(0), Scalar::constant(2)};
    Coeff s2 = {Scalar::constant(0), Scalar::constant(3), Scalar::constant(1)};
    Coeff br = action_courant_bracket(act, s1, s2);
    CHECK(coeff_identity(c3, br, so3->bracket(s1, s2), 1e-12).pass);
  }

  // so(3) x| R^3 with the hyperbolic pairing, acting by rotations on R^3
  {
    std::vector<std::string> names = {"r01", "r02", "r12", "t0", "t1", "t2"};
    std::vector<Rational> rep;
    auto put = [&](std::vector<Rational>& m, int r, int c, long long v) {
      m[static_cast<size_t>(r * 4 + c)] = Rational::integer(v);
    };
    const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (int k = 0; k < 3; ++k) {
      std::vector<Rational> m(16, Rational{});
      put(m, pairs[k][0], pairs[k][1], 1);
      put(m, pairs[k][1], pairs[k][0], -1);
      rep.insert(rep.end(), m.begin(), m.end());
    }
    for (int i = 0; i < 3; ++i) {
      std::vector<Rational> m(16, Rational{});
      put(m, i, 3, 1);
      rep.insert(rep.end(), m.begin(), m.end());
    }
    // hyperbolic pairing epsilon-matched across the two summands
    std::vector<Rational> K(36, Rational{});
    auto setk = [&](int i, int j, long long v) {
      K[static_cast<size_t>(i * 6 + j)] = Rational::integer(v);
      K[static_cast<size_t>(j * 6 + i)] = Rational::integer(v);
    };
    setk(0, 5, 1);
    setk(1, 4, -1);
    setk(2, 3, 1);
    auto dk =
        std::make_shared<const LieAlgebra>(LieAlgebra(names, 4, std::move(rep), std::move(K)));
    for (const auto& r : dk->validate()) {
      INFO(r.tag);
      CHECK(r.pass);
    }

    auto rotfield = [&](int a, int b) {
      std::vector<Scalar> comps(3, Scalar::constant(0));
      comps[static_cast<size_t>(a)] = -Scalar::coordinate(c3, b);
      comps[static_cast<size_t>(b)] = Scalar::coordinate(c3, a);
      return VecField(c3, comps);
    };
    ActionStructure act{dk,
                        {rotfield(0, 1), rotfield(0, 2), rotfield(1, 2), VecField::zero(c3),
                         VecField::zero(c3), VecField::zero(c3)}};
    act.check_action_property();

    SplitMix64 rng(99);
    std::vector<Coeff> pool;
    for (int k = 0; k < 6; ++k) {
      pool.push_back(dk->basis_element(k));
      Coeff lin = dk->zero_element();
      lin[static_cast<size_t>(k)] = Scalar::coordinate(c3, static_cast<int>(rng.next() % 3));
      pool.push_back(lin);
    }
    auto bracket = [&](const Coeff& a, const Coeff& b) {
      return action_courant_bracket(act, a, b);
    };
    double worst = 0;
    for (int t = 0; t < 10; ++t) {
      const Coeff& e1 = pool[rng.next() % pool.size()];
      const Coeff& e2 = pool[rng.next() % pool.size()];
      const Coeff& e3 = pool[rng.next() % pool.size()];
      Coeff lhs = bracket(e1, bracket(e2, e3));
      Coeff rhs = bracket(bracket(e1, e2), e3);
      Coeff rhs2 = bracket(e2, bracket(e1, e3));
      for (size_t i = 0; i < lhs.size(); ++i) rhs[i] = rhs[i] + rhs2[i];
      auto r1 = coeff_identity(c3, lhs, rhs, 1e-8);
      worst = std::max(worst, r1.worst_residual);
      Scalar il = act.anchor(e1).apply(dk->pairing(e2, e3));
      Scalar ir = dk->pairing(bracket(e1, e2), e3) + dk->pairing(e2, bracket(e1, e3));
      auto r2 = identical_on_samples(Scalar(c3, il.expr()), Scalar(c3, ir.expr()), 1e-8);
      worst = std::max(worst, r2.worst_residual);
      Scalar sl = dk->pairing(bracket(e1, e1), e2);
      Scalar sr = act.anchor(e2).apply(dk->pairing(e1, e1)) * Scalar::constant(Rational(1, 2));
      auto r3 = identical_on_samples(Scalar(c3, sl.expr()), Scalar(c3, sr.expr()), 1e-8);
      worst = std::max(worst, r3.worst_residual);
    }
    CHECK(worst <= 1e-8);

    // broken action is rejected
    ActionStructure broken = act;
    broken.rho[0] = rotfield(0, 1).scaled(sc(c3, "x2"));
    CHECK_THROWS_AS(broken.check_action_property(), ActionViolation);
  }
}
