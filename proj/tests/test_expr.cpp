#include <doctest.h>

#include <cmath>

#include "helpers.hpp"

using namespace ck;
using namespace ckt;

TEST_CASE("parser evaluates arithmetic readings") {
  auto c2 = chart_r2();
  CHECK(sc(c2, "x0^2 + sin(x1)").eval(std::vector<double>{1.0, 0.0}) == doctest::Approx(1.0));

  auto c1 = chart_r1();
  CHECK(sc(c1, "1/(1 + x0^2)").eval(std::vector<double>{2.0}) == doctest::Approx(0.2));

  CHECK(sc(c2, "x0 + x1").eval(std::vector<double>{2.0, 3.0}) == doctest::Approx(5.0));
  CHECK(sc(c2, "2*x0*x1 - x1/4").eval(std::vector<double>{0.5, 2.0}) == doctest::Approx(1.5));
  CHECK(sc(c1, "-x0^3").eval(std::vector<double>{2.0}) == doctest::Approx(-8.0));
  CHECK(sc(c1, "x0^-2").eval(std::vector<double>{2.0}) == doctest::Approx(0.25));
  CHECK(sc(c1, "0.25 + 1/2").eval(std::vector<double>{0.0}) == doctest::Approx(0.75));
}

TEST_CASE("parser rejects malformed input with positions") {
  auto c2 = chart_r2();
  CHECK_THROWS_AS(sc(c2, "x0 + "), SyntaxError);
  CHECK_THROWS_AS(sc(c2, "sin x0"), SyntaxError);
  CHECK_THROWS_AS(sc(c2, "(x0 + x1"), SyntaxError);
  CHECK_THROWS_AS(sc(c2, "x0 x1"), SyntaxError);
  CHECK_THROWS_AS(sc(c2, "y0 + 1"), UnknownIdentifier);
  try {
    sc(c2, "x0 + @");
    CHECK(false);
  } catch (const SyntaxError& e) {
    CHECK(e.position == 5);
    CHECK(!e.expected.empty());
  }
}

TEST_CASE("partial derivatives follow symbolic rules") {
  auto c2 = chart_r2();
  // d0(x0*x1) = x1
  auto d = sc(c2, "x0*x1").partial(0);
  CHECK(identical_on_samples(d, sc(c2, "x1")).pass);

  // d1 of a constant vanishes
  CHECK(sc(c2, "7").partial(1).is_zero());

  // d0 sin(x0^2) at x0 = 1 equals 2 cos(1); cross-checked against central differences
  auto c1 = chart_r1();
  Scalar s = sc(c1, "sin(x0^2)");
  Scalar ds = s.partial(0);
  std::vector<double> p{1.0};
  CHECK(ds.eval(p) == doctest::Approx(2 * std::cos(1.0)));
  CHECK(ds.eval(p) == doctest::Approx(finite_difference(s, p, 0)).epsilon(1e-5));

  // exp(x0)*cos(x1), partial x1 at (0, pi/2) -> -1
  Scalar e = sc(c2, "exp(x0)*cos(x1)");
  std::vector<double> q{0.0, 1.5707963267948966};
  CHECK(e.partial(1).eval(q) == doctest::Approx(-1.0));
  CHECK(e.partial(1).eval(q) == doctest::Approx(finite_difference(e, q, 1)).epsilon(1e-5));
}

TEST_CASE("finite-difference consistency across a function battery") {
  auto c3 = chart_r3();
  std::vector<std::string> battery = {
      "x0^2*x1 - x2^3",         "sin(x0*x1) + cos(x2)",  "exp(x0/2)*x1",
      "1/(2 + sin(x0) + x1^2)", "x0*x1*x2 - 3*x1 + 1/2", "cos(x0)^2*sin(x1)"};
  for (const auto& text : battery) {
    Scalar s = sc(c3, text);
    for (int i = 0; i < 3; ++i) {
      Scalar ds = s.partial(i);
      for (const auto& p : c3->samples()) {
        double sym = ds.eval(p);
        double fd = finite_difference(s, p, i);
        CHECK(std::abs(sym - fd) <= 1e-5 * (1 + std::abs(sym)));
      }
    }
  }
}

TEST_CASE("mixed partials commute") {
  auto c3 = chart_r3();
  for (const auto& text : {"x0^3*x1 - sin(x1*x2)", "exp(x0)*cos(x1) + x2^2*x0"}) {
    Scalar s = sc(c3, text);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        CHECK(identical_on_samples(s.partial(i).partial(j), s.partial(j).partial(i), 1e-9).pass);
  }
}

TEST_CASE("evaluation guards domains") {
  auto c1 = chart_r1();
  Scalar s(c1, Expr::integer(1) / Expr::var(0));
  CHECK_THROWS_AS(s.eval(std::vector<double>{0.0}), DomainError);
  // parse_expr validates chart samples, so a pole at a sample is rejected outright
  CHECK_THROWS_AS(sc(c1, "1/(x0 - 3/10)"), DomainError);
}

TEST_CASE("sampled identity oracle") {
  auto c2 = chart_r2();
  CHECK(identical_on_samples(sc(c2, "(x0+x1)^2"), sc(c2, "x0^2 + 2*x0*x1 + x1^2")).pass);
  CHECK(identical_on_samples(sc(c2, "sin(2*x0)"), sc(c2, "2*sin(x0)*cos(x0)")).pass);
  CHECK(identical_on_samples(sc(c2, "sin(x0)^2"), sc(c2, "1 - cos(x0)^2"), 1e-12).pass);

  auto bad = identical_on_samples(sc(c2, "x0"), sc(c2, "x0 + 1/1000"), 1e-9);
  CHECK(!bad.pass);
  CHECK(bad.worst_abs == doctest::Approx(1e-3));
  CHECK(bad.points_checked == 8 + 32);
}

TEST_CASE("printer round-trips by value") {
  auto c3 = chart_r3();
  for (const auto& text :
       {"x0^2 + sin(x1)*cos(x2)", "1/(2 + x0^2) - exp(x1/3)", "-x0*(x1 - 2)^3 + 5/7",
        "x0^-2 + 2.5*x1", "-(x0 + x1)/(3 - x2/4)"}) {
    Scalar s = sc(c3, text);
    Scalar back = sc(c3, s.str());
    CHECK(identical_on_samples(s, back, 1e-12).pass);
  }
}

TEST_CASE("deterministic box sampling") {
  auto c2 = chart_r2();
  auto p1 = c2->eval_points(32, kDefaultSeed);
  auto p2 = c2->eval_points(32, kDefaultSeed);
  CHECK(p1 == p2);
  auto p3 = c2->eval_points(32, 12345);
  CHECK(p1 != p3);
  for (const auto& p : p1)
    for (size_t i = 0; i < p.size(); ++i) {
      CHECK(p[i] >= -2.0);
      CHECK(p[i] <= 2.0);
    }
}

TEST_CASE("chart invariants are enforced") {
  CHECK_THROWS_AS(make_chart("bad", {"x"}, {}), SchemaError);
  CHECK_THROWS_AS(make_chart("bad", {"x"}, {{0.0, 1.0}}), SchemaError);
  CHECK_THROWS_AS(make_chart("bad", {"x"}, {{5.0}}, Box{{-1.0}, {1.0}}), SchemaError);
}
