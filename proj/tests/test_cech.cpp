#include <doctest.h>

#include <cmath>

#include <courantkit/cech.hpp>

#include "helpers.hpp"

using namespace ck;
using namespace ckt;

namespace {

const Cover& box_cover4() {
  static Cover cover = same_box_cover("box4", {"x0", "x1"}, Box{{-1.0, -1.0}, {1.0, 1.0}}, 4);
  return cover;
}

}  // namespace

TEST_CASE("cover simplicial identities and lookup") {
  const Cover& cover = box_cover4();
  for (const auto& r : cover.validate()) {
    INFO(r.location);
    CHECK(r.pass);
  }
  CHECK(cover.find({0, 1}) != nullptr);
  CHECK(cover.find({1, 3}) != nullptr);
  CHECK(cover.find({0, 1, 2, 3}) != nullptr);
  CHECK_THROWS_AS(cover.require({7, 8}), MissingOverlap);
}

TEST_CASE("cech differential of a zero-cochain gives differences") {
  const Cover& cover = box_cover4();
  FormCochain c = FormCochain::zero(cover, 0, 0);
  for (int i = 0; i < cover.chart_count(); ++i) {
    Form f(cover.chart(i), 0, CoeffSpace::Scalar, 1);
    f.add_term({}, {Scalar::constant(10 + i)});
    c.set({i}, std::move(f));
  }
  FormCochain dc = cech_delta(c);
  for (const Overlap* o : cover.of_degree(1)) {
    Coeff v = dc.at(o->indices).coeff_at({});
    double expect = (10 + o->indices[1]) - (10 + o->indices[0]);
    CHECK(v[0].eval(o->chart->samples()[0]) == doctest::Approx(expect));
  }
}

TEST_CASE("delta squared vanishes on random cochains") {
  const Cover& cover = box_cover4();
  for (uint64_t seed : {11ull, 22ull, 33ull}) {
    for (int form_degree : {0, 1}) {
      FormCochain c = random_form_cochain(cover, 0, form_degree, seed);
      FormCochain dd = cech_delta(cech_delta(c));
      auto r = cochain_identity(
          dd, FormCochain::zero(cover, 2, form_degree), 1e-9);
      INFO("seed " << seed << " deg " << form_degree << ": " << r.describe());
      CHECK(r.pass);
      // one level deeper
      FormCochain c1 = random_form_cochain(cover, 1, form_degree, seed * 5 + 1);
      FormCochain dd1 = cech_delta(cech_delta(c1));
      CHECK(cochain_identity(dd1, FormCochain::zero(cover, 3, form_degree), 1e-9).pass);
    }
    CircleCochain u = random_circle_cochain(cover, 0, seed);
    CHECK(circle_residual(cech_delta(cech_delta(u))) <= 1e-9);
  }
}

TEST_CASE("delta commutes with d and dlog") {
  const Cover& cover = box_cover4();
  for (uint64_t seed : {5ull, 6ull}) {
    FormCochain c = random_form_cochain(cover, 0, 1, seed);
    CHECK(cochain_identity(cech_delta(c).d(), cech_delta(c.d()), 1e-9).pass);

    CircleCochain f = random_circle_cochain(cover, 1, seed);
    CHECK(cochain_identity(cech_delta(dlog(f)), dlog(cech_delta(f)), 1e-9).pass);
  }
}

TEST_CASE("circle arithmetic is mod one") {
  const Cover& cover = box_cover4();
  CircleCochain a = CircleCochain::zero(cover, 0);
  CircleCochain b = CircleCochain::zero(cover, 0);
  for (int i = 0; i < cover.chart_count(); ++i) {
    a.set({i}, sc(cover.chart(i), "x0/4"));
    b.set({i}, sc(cover.chart(i), "x0/4 + 3"));  // same circle value, lift differs by 3
  }
  CHECK(circle_cochain_residual(a, b) <= 1e-12);
  CircleCochain c = b;
  c.set({0}, sc(cover.chart(0), "x0/4 + 1/2"));
  CHECK(circle_cochain_residual(a, c) > 0.4);

  // dlog kills constants and is lift-independent
  CircleCochain constant = CircleCochain::zero(cover, 0);
  for (int i = 0; i < cover.chart_count(); ++i)
    constant.set({i}, Scalar(cover.chart(i), Expr::num(Rational(5, 7))));
  for (const auto& [idx, f] : dlog(constant).comps) CHECK(f.is_zero());
  CHECK(cochain_identity(dlog(a), dlog(b), 1e-12).pass);
}

TEST_CASE("deligne differential squares to zero and patterns hold") {
  const Cover& cover = box_cover4();

  for (uint64_t seed : {44ull, 55ull}) {
    // degree-1 cochain (phi, alpha) at depth 2
    DeligneCochain x = DeligneCochain::zero(cover, 1, 2);
    x.circle = random_circle_cochain(cover, 1, seed);
    x.forms[0] = random_form_cochain(cover, 0, 1, seed + 1);

    DeligneCochain dx = deligne_D(x);
    // coboundaries are cocycles
    for (const auto& r : deligne_cocycle_check(dx)) {
      INFO(r.tag << " " << r.witness << " residual " << r.residual);
      CHECK(r.pass);
    }
    // and D(D(x)) vanishes identically
    DeligneCochain ddx = deligne_D(dx);
    CHECK(circle_residual(ddx.circle) <= 1e-9);
    for (const auto& f : ddx.forms)
      CHECK(cochain_identity(f, FormCochain::zero(cover, f.cech_degree, f.form_degree), 1e-9)
                .pass);
  }

  // depth-2 coboundary written out: (delta phi, delta alpha - dlog phi, d alpha)
  DeligneCochain x = DeligneCochain::zero(cover, 1, 2);
  x.circle = random_circle_cochain(cover, 1, 77);
  x.forms[0] = random_form_cochain(cover, 0, 1, 78);
  DeligneCochain dx = deligne_D(x);
  CHECK(circle_cochain_residual(dx.circle, cech_delta(x.circle)) <= 1e-12);
  FormCochain expect1 = cech_delta(x.forms[0]) - dlog(x.circle);
  CHECK(cochain_identity(dx.forms[0], expect1, 1e-9).pass);
  CHECK(cochain_identity(dx.forms[1], x.forms[0].d(), 1e-9).pass);

  // descent check: D(x) = y matches itself
  for (const auto& r : deligne_descent_check(x, dx)) {
    INFO(r.tag);
    CHECK(r.pass);
  }
  // and fails against a perturbed target
  DeligneCochain bad = dx;
  FormCochain petrb = bad.forms[0];
  const Overlap* o = cover.of_degree(1).front();
  Form extra = Form::scalar_zero(o->chart, 1);
  extra.add_term({0}, {sc(o->chart, "1/100")});
  petrb.set(o->indices, petrb.at(o->indices) + extra);
  bad.forms[0] = petrb;
  bool any_fail = false;
  for (const auto& r : deligne_descent_check(x, bad)) any_fail = any_fail || !r.pass;
  CHECK(any_fail);
}
