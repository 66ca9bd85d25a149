#include <doctest.h>

#include "helpers.hpp"

using namespace ck;
using namespace ckt;

TEST_CASE("builtin algebras satisfy the quadratic axioms") {
  for (const auto* name : {"so2", "so3", "so4", "so4_mixed", "abelian2"}) {
    auto alg = LieAlgebra::builtin(name);
    for (const auto& r : alg.validate()) {
      INFO(name << " " << r.tag);
      CHECK(r.pass);
    }
  }
}

TEST_CASE("pairing inverse duality") {
  auto so3 = LieAlgebra::so(3);
  Coeff xi = {Scalar::constant(2), Scalar::constant(-1), Scalar::constant(Rational(1, 3))};
  Coeff dual = so3.k_dual(xi);
  for (int j = 0; j < 3; ++j) {
    Scalar lhs = so3.pairing(dual, so3.basis_element(j));
    CHECK(std::abs(lhs.eval(std::vector<double>{}) - xi[static_cast<size_t>(j)].eval(std::vector<double>{})) < 1e-12);
  }
}

TEST_CASE("maurer-cartan pullback closed forms") {
  auto c1 = chart_r1();
  auto so2 = LieAlgebra::so(2);

  // constant map -> A = 0
  GroupMap id = GroupMap::identity(c1, 2);
  CHECK(mc_pullback(id, so2).is_zero());

  // rotation by angle x0: dg g^{-1} = x0' * [[0,-1],[1,0]] = -rep(e01), so A = -e01 dx0
  GroupMap g = rot2(c1, "x0");
  Form A = mc_pullback(g, so2);
  Form expect = lie_one_form(c1, so2, {{"-1"}});
  CHECK(form_identity(A, expect, 1e-12).pass);
}

TEST_CASE("maurer-cartan identity suite over builtin maps") {
  auto c2 = chart_r2();
  auto c3 = chart_r3();
  auto so2 = LieAlgebra::so(2);
  auto so3 = LieAlgebra::so(3);

  std::vector<std::pair<GroupMap, const LieAlgebra*>> maps;
  maps.emplace_back(rot2(c2, "x0"), &so2);
  maps.emplace_back(rot2(c2, "x0*x1"), &so2);
  maps.emplace_back(rot2(c2, "x0^2 + x1"), &so2);
  maps.emplace_back(rot3_z(c3, "x0"), &so3);
  maps.emplace_back(rot3_z(c3, "x0") * rot3_x(c3, "x1") * rot3_z(c3, "x2"), &so3);
  maps.emplace_back(rot3_y(c3, "x0*x2") * rot3_x(c3, "x1^2"), &so3);

  for (auto& [g, alg] : maps) {
    for (const auto& r : g.validate()) {
      INFO(r.tag);
      CHECK(r.pass);
    }
    auto fields = polynomial_lie_fields(g.chart(), *alg);
    auto results = mc_identity_check(g, *alg, fields);
    for (const auto& r : results) {
      INFO(r.tag << " @ " << r.location << " : " << r.witness);
      CHECK(r.pass);
      CHECK(r.residual <= 1e-8);
    }
  }
}

TEST_CASE("adjoint action: automorphism and K-orthogonality") {
  auto c3 = chart_r3();
  auto so3 = LieAlgebra::so(3);
  GroupMap g = rot3_z(c3, "x0") * rot3_x(c3, "x1*x2");

  // identity adjoint
  Coeff b = {sc(c3, "x0"), sc(c3, "1"), sc(c3, "x2^2")};
  Coeff idb = adjoint(GroupMap::identity(c3, 3), so3, b);
  CHECK(coeff_identity(c3, idb, b, 1e-12).pass);

  Coeff a = {sc(c3, "x1"), sc(c3, "-2"), sc(c3, "x0*x2")};
  Coeff ga = adjoint(g, so3, a);
  Coeff gb = adjoint(g, so3, b);

  // [Ad a, Ad b] = Ad [a, b]
  CHECK(coeff_identity(c3, so3.bracket(ga, gb), adjoint(g, so3, so3.bracket(a, b)), 1e-9).pass);
  // (Ad a, Ad b) = (a, b)
  CHECK(identical_on_samples(so3.pairing(ga, gb), so3.pairing(a, b), 1e-9).pass);
}

TEST_CASE("chern-simons three-form") {
  auto c2 = chart_r2();
  auto c4 = chart_r4();
  auto so3 = LieAlgebra::so(3);

  // zero input and dimension collapse
  CHECK(cs3(lie_zero_form(c2, 1, so3), so3).is_zero());
  Form theta2 = lie_one_form(c2, so3, {{"x1", "x0", ""}, {"", "x0*x1", "1"}});
  CHECK(cs3(theta2, so3).is_zero());  // any 3-form on a 2-chart vanishes

  // d cs3(theta) = (R, R) with R = d theta + 1/2 [theta, theta]
  Form theta = lie_one_form(
      c4, so3, {{"x0", "", ""}, {"", "x1*x2", ""}, {"", "", "x3"}, {"x2", "x0*x3", ""}});
  Form R = curvature_form(theta, so3);
  CHECK(form_identity(cs3(theta, so3).d(), wedge_K(R, R, so3), 1e-8).pass);

  // and on the commuting two-block field used for the Pontryagin scenario
  auto so4m = LieAlgebra::so4_mixed(Rational::integer(1), Rational(1, 2));
  Form blocks = lie_one_form(c4, so4m, {{"", "", "", "", "", ""},
                                        {"x0", "", "", "", "", ""},
                                        {"", "", "", "", "", ""},
                                        {"", "", "", "", "", "x2"}});
  Form Rb = curvature_form(blocks, so4m);
  CHECK(form_identity(cs3(blocks, so4m).d(), wedge_K(Rb, Rb, so4m), 1e-9).pass);
}

TEST_CASE("cartan three-form and the gauge shift of cs3") {
  auto c3 = chart_r3();
  auto so3 = LieAlgebra::so(3);
  auto ab = LieAlgebra::abelian(2);

  CHECK(cartan3(GroupMap::identity(c3, 3), so3).is_zero());

  // abelian algebra: bracket vanishes, so the Cartan form vanishes for any map
  GroupMap gd(c3, 2, {sc(c3, "exp(x0)"), sc(c3, "0"), sc(c3, "0"), sc(c3, "exp(x1)")},
              GroupMap::Tag::General);
  CHECK(cartan3(gd, ab).is_zero());

  // cs3(theta1) - cs3(theta0) = d(theta0, A)^K - 1/6 cartan3, where
  // theta1 = Ad_{g^{-1}}(theta0 + A), A = g*theta_MC.
  GroupMap g = rot3_z(c3, "x0*x1") * rot3_x(c3, "x2");
  Form A = mc_pullback(g, so3);
  Form theta0 = lie_one_form(c3, so3, {{"x1", "", "x0"}, {"", "x2", ""}, {"1", "", "x0*x1"}});
  Form theta1 = adjoint_form(g.inverse(), so3, theta0 + A);
  Form lhs = cs3(theta1, so3) - cs3(theta0, so3);
  Form rhs = wedge_K(theta0, A, so3).d() - cartan3(g, so3).scaled(Rational(1, 6));
  CHECK(form_identity(lhs, rhs, 1e-8).pass);
}

TEST_CASE("conversion gate rejects off-span matrices") {
  auto c2 = chart_r2();
  auto so2 = LieAlgebra::so(2);
  // a general (non-orthogonal) map whose dg g^{-1} leaves the so(2) span
  GroupMap bad(c2, 2, {sc(c2, "exp(x0)"), sc(c2, "0"), sc(c2, "0"), sc(c2, "1")},
               GroupMap::Tag::General);
  CHECK_THROWS_AS(mc_pullback(bad, so2), ConversionError);
}
