#pragma once

#include <courantkit/form.hpp>
#include <courantkit/groupmap.hpp>

// Shared fixtures for the unit suites.
namespace ckt {

using namespace ck;

inline ChartPtr chart_r1() {
  static ChartPtr c = make_chart(
      "r1", {"x0"},
      {{0.3}, {-0.7}, {1.1}, {0.5}, {-1.3}, {0.9}, {-0.2}, {1.7}},
      Box{{-2.0}, {2.0}});
  return c;
}

inline ChartPtr chart_r2() {
  static ChartPtr c = make_chart(
      "r2", {"x0", "x1"},
      {{0.3, -0.4}, {-0.7, 0.2}, {1.1, 0.8}, {0.5, -1.2}, {-1.3, 0.6}, {0.9, 1.4}, {-0.2, -0.9},
       {1.6, 0.1}},
      Box{{-2.0, -2.0}, {2.0, 2.0}});
  return c;
}

inline ChartPtr chart_r3() {
  static ChartPtr c = make_chart(
      "r3", {"x0", "x1", "x2"},
      {{0.3, -0.4, 0.8}, {-0.7, 0.2, -0.5}, {1.1, 0.8, 0.3}, {0.5, -1.2, 0.9},
       {-1.3, 0.6, -0.1}, {0.9, 1.4, -0.8}, {-0.2, -0.9, 1.2}, {1.6, 0.1, 0.4},
       {0.1, 0.7, -1.4}, {-0.6, -0.3, 0.6}},
      Box{{-1.8, -1.8, -1.8}, {1.8, 1.8, 1.8}});
  return c;
}

inline ChartPtr chart_r4() {
  static ChartPtr c = make_chart(
      "r4", {"x0", "x1", "x2", "x3"},
      {{0.3, -0.4, 0.8, 0.2}, {-0.7, 0.2, -0.5, 0.9}, {1.1, 0.8, 0.3, -0.6},
       {0.5, -1.2, 0.9, 0.4}, {-1.3, 0.6, -0.1, -0.8}, {0.9, 1.4, -0.8, 0.1},
       {-0.2, -0.9, 1.2, -0.3}, {1.6, 0.1, 0.4, 0.7}},
      Box{{-1.8, -1.8, -1.8, -1.8}, {1.8, 1.8, 1.8, 1.8}});
  return c;
}

inline Scalar sc(const ChartPtr& chart, const std::string& text) {
  return parse_expr(text, chart);
}

// SO(2) rotation block by the given angle expression.
inline GroupMap rot2(const ChartPtr& chart, const std::string& angle) {
  Scalar a = sc(chart, angle);
  return GroupMap(chart, 2, {Scalar::cos(a), -Scalar::sin(a), Scalar::sin(a), Scalar::cos(a)});
}

// Rotations about the z / x / y axes in SO(3).
inline GroupMap rot3_z(const ChartPtr& chart, const std::string& angle) {
  Scalar a = sc(chart, angle);
  Scalar z = Scalar::constant(0), one = Scalar::constant(1);
  return GroupMap(chart, 3,
                  {Scalar::cos(a), -Scalar::sin(a), z, Scalar::sin(a), Scalar::cos(a), z, z, z,
                   one});
}
inline GroupMap rot3_x(const ChartPtr& chart, const std::string& angle) {
  Scalar a = sc(chart, angle);
  Scalar z = Scalar::constant(0), one = Scalar::constant(1);
  return GroupMap(chart, 3,
                  {one, z, z, z, Scalar::cos(a), -Scalar::sin(a), z, Scalar::sin(a),
                   Scalar::cos(a)});
}
inline GroupMap rot3_y(const ChartPtr& chart, const std::string& angle) {
  Scalar a = sc(chart, angle);
  Scalar z = Scalar::constant(0), one = Scalar::constant(1);
  return GroupMap(chart, 3,
                  {Scalar::cos(a), z, Scalar::sin(a), z, one, z, -Scalar::sin(a), z,
                   Scalar::cos(a)});
}

// Lie-valued 1-form from per-coordinate component expressions:
// comps[mu][k] is the e_k-coefficient of the dx^mu slot.
inline Form lie_one_form(const ChartPtr& chart, const LieAlgebra& alg,
                         const std::vector<std::vector<std::string>>& comps) {
  Form f = lie_zero_form(chart, 1, alg);
  for (size_t mu = 0; mu < comps.size(); ++mu) {
    Coeff c = alg.zero_element();
    for (size_t k = 0; k < comps[mu].size(); ++k)
      if (!comps[mu][k].empty()) c[k] = sc(chart, comps[mu][k]);
    f.add_term({static_cast<int>(mu)}, std::move(c));
  }
  return f;
}

inline Form scalar_form(const ChartPtr& chart, int degree,
                        const std::vector<std::pair<MultiIndex, std::string>>& terms) {
  Form f = Form::scalar_zero(chart, degree);
  for (const auto& [idx, text] : terms) f.add_term(idx, {sc(chart, text)});
  return f;
}

}  // namespace ckt
