#pragma once

#include <optional>

#include "courantkit/form.hpp"
#include "courantkit/sweep.hpp"

namespace ck {

// A quadratic Lie algebra: basis, structure constants, invariant pairing K, and
// a faithful matrix representation used for group-valued computations. The rep
// basis must be trace-orthogonal, which makes the matrix-to-coordinates
// projection exact.
class LieAlgebra {
 public:
  LieAlgebra(std::vector<std::string> basis_names, int rep_size,
             std::vector<Rational> rep_matrices, std::vector<Rational> pairing,
             std::optional<std::vector<Rational>> structure_constants = std::nullopt);

  int dim() const { return dim_; }
  int rep_size() const { return rep_m_; }
  const std::vector<std::string>& basis_names() const { return basis_names_; }

  Rational structure_constant(int k, int i, int j) const {
    return c_[static_cast<size_t>((i * dim_ + j) * dim_ + k)];
  }
  Rational pairing_entry(int i, int j) const { return K_[static_cast<size_t>(i * dim_ + j)]; }
  Rational pairing_inverse_entry(int i, int j) const {
    return Kinv_[static_cast<size_t>(i * dim_ + j)];
  }
  Rational rep_entry(int k, int r, int c) const {
    return rep_[static_cast<size_t>((k * rep_m_ + r) * rep_m_ + c)];
  }

  // [a, b] on coordinate vectors of Scalars.
  Coeff bracket(const Coeff& a, const Coeff& b) const;
  // (a, b)^K
  Scalar pairing(const Coeff& a, const Coeff& b) const;
  // K^{-1} applied to a functional given by its coefficients xi_k = xi(e_k).
  Coeff k_dual(const Coeff& functional) const;

  // Coordinates -> rep matrix (row-major m x m Scalars).
  std::vector<Scalar> to_matrix(const Coeff& a) const;
  // Trace-orthogonal projection of an m x m Scalar matrix onto the rep span.
  Coeff from_matrix(const std::vector<Scalar>& mat) const;

  Coeff zero_element() const { return Coeff(static_cast<size_t>(dim_), Scalar::constant(0)); }
  Coeff basis_element(int k) const;

  // Antisymmetry, Jacobi, K symmetry and nondegeneracy, invariance, and
  // rep-commutator consistency.
  std::vector<CheckResult> validate(double tol = 1e-12) const;

  static LieAlgebra so(int n);  // K = -1/2 tr(XY)
  // so(4) with K = alpha * (-1/2 tr) + beta * Pfaffian pairing
  static LieAlgebra so4_mixed(Rational alpha, Rational beta);
  static LieAlgebra abelian(int k);
  static LieAlgebra zero_algebra();
  static LieAlgebra builtin(const std::string& name);

 private:
  int dim_;
  int rep_m_;
  std::vector<std::string> basis_names_;
  std::vector<Rational> rep_;   // dim matrices, row-major
  std::vector<Rational> K_;     // dim x dim
  std::vector<Rational> Kinv_;  // dim x dim
  std::vector<Rational> c_;     // c[(i*dim+j)*dim+k] = c^k_{ij}
  std::vector<Rational> rep_norm_;  // tr(rep_k rep_k^T), per basis element
};

enum class PairingRule { ScalarMul, KPairing, LieBracket, MatrixMul };

// Lie-valued wedge variants. wedge_K pairs coefficients through K (lie x lie ->
// scalar); wedge_bracket brackets them (lie x lie -> lie).
Form wedge_K(const Form& a, const Form& b, const LieAlgebra& g);
Form wedge_bracket(const Form& a, const Form& b, const LieAlgebra& g);
Form wedge_rule(const Form& a, const Form& b, PairingRule rule, const LieAlgebra* g = nullptr);

// dθ + 1/2 [θ, θ]
Form curvature_form(const Form& theta, const LieAlgebra& g);
// (θ, dθ) + 1/3 (θ, [θ, θ])
Form cs3(const Form& theta, const LieAlgebra& g);

Form lie_zero_form(const ChartPtr& chart, int degree, const LieAlgebra& g);

}  // namespace ck
