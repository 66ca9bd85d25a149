#pragma once

#include "courantkit/liealg.hpp"

namespace ck {

// A matrix-group-valued symbolic map on a chart. SO-tagged maps are inverted by
// transposition; general maps by adjugate/determinant (rep size <= 3).
class GroupMap {
 public:
  enum class Tag { SO, General };

  GroupMap(ChartPtr chart, int m, std::vector<Scalar> matrix, Tag tag = Tag::SO);

  static GroupMap identity(const ChartPtr& chart, int m, Tag tag = Tag::SO);

  const ChartPtr& chart() const { return chart_; }
  int size() const { return m_; }
  Tag tag() const { return tag_; }
  const std::vector<Scalar>& matrix() const { return mat_; }
  const Scalar& entry(int r, int c) const { return mat_[static_cast<size_t>(r * m_ + c)]; }

  GroupMap inverse() const;
  GroupMap transpose() const;
  friend GroupMap operator*(const GroupMap&, const GroupMap&);

  // Pullback along a chart map: entries composed with f.
  GroupMap pulled_back(const SmoothMap& f) const;

  // Invertibility at samples; SO tag additionally checks g^T g = I and det g = 1.
  std::vector<CheckResult> validate(double tol = 1e-9) const;

  Scalar det() const;

 private:
  ChartPtr chart_;
  int m_;
  std::vector<Scalar> mat_;
  Tag tag_;
};

// Right-invariant Maurer-Cartan pullback dg * g^{-1} converted to algebra
// coordinates; the conversion residual is gated at tol.projection on samples.
Form mc_pullback(const GroupMap& g, const LieAlgebra& alg,
                 const Tolerances& tol = Tolerances{});

// Ad_g applied to algebra coordinates (g * a * g^{-1} through the rep).
Coeff adjoint(const GroupMap& g, const LieAlgebra& alg, const Coeff& a,
              const Tolerances& tol = Tolerances{});
// Ad_g applied to every coefficient of a Lie-valued form.
Form adjoint_form(const GroupMap& g, const LieAlgebra& alg, const Form& omega,
                  const Tolerances& tol = Tolerances{});

// Pullback of the Cartan 3-form: the scalar 3-form (A, [A, A])^K with
// A = mc_pullback(g), i.e. (X,Y,Z) -> 6 (A(X), [A(Y), A(Z)])^K.
Form cartan3(const GroupMap& g, const LieAlgebra& alg, const Tolerances& tol = Tolerances{});

// Maurer-Cartan identity suite: flatness dA - 1/2 [A,A] = 0, the bracket
// compatibility of A on coordinate fields, and Ad-derivation compatibility
// X(Ad_g b) - [A(X), Ad_g b] = Ad_g(X(b)) for polynomial fields b.
std::vector<CheckResult> mc_identity_check(const GroupMap& g, const LieAlgebra& alg,
                                           const std::vector<Coeff>& b_fields,
                                           const Tolerances& tol = Tolerances{},
                                           ExecMode mode = default_mode());

// Deterministic polynomial test fields: basis elements with constant and
// degree-1 monomial coefficients.
std::vector<Coeff> polynomial_lie_fields(const ChartPtr& chart, const LieAlgebra& alg);

}  // namespace ck
