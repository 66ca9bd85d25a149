#pragma once

#include <functional>
#include <map>
#include <vector>

#include "courantkit/scalar.hpp"

namespace ck {

// Coefficient space of a differential form: plain functions, Lie-algebra-valued
// (a coordinate vector per basis), or matrix-valued (row-major m x m).
enum class CoeffSpace { Scalar, Lie, Matrix };

using MultiIndex = std::vector<int>;  // strictly increasing coordinate indices
using Coeff = std::vector<Scalar>;    // length 1 (scalar), algebra dim, or m*m

// A vector field on a chart, one Scalar per coordinate.
class VecField {
 public:
  VecField(ChartPtr chart, std::vector<Scalar> components);
  static VecField coordinate(const ChartPtr& chart, int i);
  static VecField zero(const ChartPtr& chart);

  const ChartPtr& chart() const { return chart_; }
  const std::vector<Scalar>& components() const { return components_; }
  const Scalar& component(int i) const { return components_[static_cast<size_t>(i)]; }

  // Directional derivative of a function: sum_mu X^mu d_mu f.
  Scalar apply(const Scalar& f) const;
  Coeff apply(const Coeff& c) const;

  friend VecField operator+(const VecField&, const VecField&);
  friend VecField operator-(const VecField&, const VecField&);
  VecField scaled(const Scalar& f) const;

 private:
  ChartPtr chart_;
  std::vector<Scalar> components_;
};

// Commutator of vector fields, [X,Y]^mu = X(Y^mu) - Y(X^mu).
VecField vf_bracket(const VecField& X, const VecField& Y);

// A map between charts given by target-coordinate expressions on the source chart.
class SmoothMap {
 public:
  SmoothMap(ChartPtr source, ChartPtr target, std::vector<Scalar> components);
  static SmoothMap identity(const ChartPtr& chart);

  const ChartPtr& source() const { return source_; }
  const ChartPtr& target() const { return target_; }
  const std::vector<Scalar>& components() const { return components_; }

  std::vector<double> eval(std::span<const double> point) const;
  Scalar pull_scalar(const Scalar& f) const;  // f on target -> f о map on source

  // this after g: (this о g), g mapping into this->source().
  SmoothMap compose_after(const SmoothMap& g) const;

 private:
  ChartPtr source_;
  ChartPtr target_;
  std::vector<Scalar> components_;
};

// Degree-k differential form with coefficients over increasing multi-indices.
// Zero coefficients are dropped; degree above the chart dimension is the zero form.
class Form {
 public:
  Form(ChartPtr chart, int degree, CoeffSpace space, int coeff_len);

  static Form zero(ChartPtr chart, int degree, CoeffSpace space, int coeff_len) {
    return Form(std::move(chart), degree, space, coeff_len);
  }
  static Form scalar_zero(ChartPtr chart, int degree) {
    return Form(std::move(chart), degree, CoeffSpace::Scalar, 1);
  }

  const ChartPtr& chart() const { return chart_; }
  int degree() const { return degree_; }
  CoeffSpace space() const { return space_; }
  int coeff_len() const { return coeff_len_; }
  const std::map<MultiIndex, Coeff>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  // Adds c * dx^(idx); idx may be unsorted, the permutation sign is applied.
  void add_term(MultiIndex idx, Coeff c);
  Coeff coeff_at(const MultiIndex& idx) const;  // zero coeff when absent

  friend Form operator+(const Form&, const Form&);
  friend Form operator-(const Form&, const Form&);
  friend Form operator-(const Form&);
  Form scaled(const Scalar& f) const;
  Form scaled(Rational r) const;

  Form d() const;
  Form interior(const VecField& X) const;
  // L_X via the Cartan formula d(i_X a) + i_X(d a).
  Form lie_derivative(const VecField& X) const;

  // Full antisymmetrized evaluation on k vector fields; the independent oracle
  // route for wedge/d identities.
  Coeff eval_on(std::span<const VecField> fields) const;

 private:
  ChartPtr chart_;
  int degree_;
  CoeffSpace space_;
  int coeff_len_;
  std::map<MultiIndex, Coeff> coeffs_;
};

// Coefficient-level product rule for wedges; returns the combined coefficient.
using CoeffCombiner = std::function<Coeff(const Coeff&, const Coeff&)>;

Form wedge_with(const Form& a, const Form& b, CoeffSpace out_space, int out_len,
                const CoeffCombiner& combine);

// Scalar-coefficient wedge.
Form wedge(const Form& a, const Form& b);
// Scaling wedge between a scalar-space form and a vector/matrix-space form.
Form wedge_scale(const Form& scalar_form, const Form& vector_form);
// Matrix-valued wedge with matrix-product coefficients.
Form wedge_matrix(const Form& a, const Form& b);

Form pullback(const SmoothMap& f, const Form& alpha);

IdentityReport form_identity(const Form& a, const Form& b, double tol = 1e-9,
                             int extra_points = 32, uint64_t seed = kDefaultSeed);
// Sampled test against the zero form of the same shape.
IdentityReport form_vanishes(const Form& a, double tol = 1e-9, int extra_points = 32,
                             uint64_t seed = kDefaultSeed);
IdentityReport coeff_identity(const ChartPtr& chart, const Coeff& a, const Coeff& b,
                              double tol = 1e-9, int extra_points = 32,
                              uint64_t seed = kDefaultSeed);

}  // namespace ck
