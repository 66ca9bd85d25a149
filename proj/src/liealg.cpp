#include "courantkit/liealg.hpp"

#include <cmath>

namespace ck {

namespace {

Rational rat_add(const Rational& a, const Rational& b) {
  auto r = Rational::add(a, b);
  if (!r) throw DomainError("rational overflow in algebra arithmetic");
  return *r;
}
Rational rat_sub(const Rational& a, const Rational& b) {
  auto r = Rational::sub(a, b);
  if (!r) throw DomainError("rational overflow in algebra arithmetic");
  return *r;
}
Rational rat_mul(const Rational& a, const Rational& b) {
  auto r = Rational::mul(a, b);
  if (!r) throw DomainError("rational overflow in algebra arithmetic");
  return *r;
}
Rational rat_div(const Rational& a, const Rational& b) {
  auto r = Rational::div(a, b);
  if (!r) throw DomainError("rational division failure in algebra arithmetic");
  return *r;
}

// Exact inverse by Gauss-Jordan elimination; throws when singular.
std::vector<Rational> rational_inverse(const std::vector<Rational>& m, int n) {
  std::vector<Rational> a = m;
  std::vector<Rational> inv(static_cast<size_t>(n * n), Rational{});
  for (int i = 0; i < n; ++i) inv[static_cast<size_t>(i * n + i)] = Rational::integer(1);
  auto at = [n](std::vector<Rational>& v, int r, int c) -> Rational& {
    return v[static_cast<size_t>(r * n + c)];
  };
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (!at(a, r, col).is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) throw DomainError("pairing matrix is singular");
    if (pivot != col)
      for (int c = 0; c < n; ++c) {
        std::swap(at(a, pivot, c), at(a, col, c));
        std::swap(at(inv, pivot, c), at(inv, col, c));
      }
    Rational p = at(a, col, col);
    for (int c = 0; c < n; ++c) {
      at(a, col, c) = rat_div(at(a, col, c), p);
      at(inv, col, c) = rat_div(at(inv, col, c), p);
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      Rational f = at(a, r, col);
      if (f.is_zero()) continue;
      for (int c = 0; c < n; ++c) {
        at(a, r, c) = rat_sub(at(a, r, c), rat_mul(f, at(a, col, c)));
        at(inv, r, c) = rat_sub(at(inv, r, c), rat_mul(f, at(inv, col, c)));
      }
    }
  }
  return inv;
}

}  // namespace

LieAlgebra::LieAlgebra(std::vector<std::string> basis_names, int rep_size,
                       std::vector<Rational> rep_matrices, std::vector<Rational> pairing,
                       std::optional<std::vector<Rational>> structure_constants)
    : dim_(static_cast<int>(basis_names.size())),
      rep_m_(rep_size),
      basis_names_(std::move(basis_names)),
      rep_(std::move(rep_matrices)),
      K_(std::move(pairing)) {
  if (static_cast<int>(rep_.size()) != dim_ * rep_m_ * rep_m_)
    throw SchemaError("rep matrix data size mismatch");
  if (static_cast<int>(K_.size()) != dim_ * dim_) throw SchemaError("pairing size mismatch");

  // Trace norms and orthogonality: tr(rep_i rep_j^T) must be diagonal.
  rep_norm_.assign(static_cast<size_t>(dim_), Rational{});
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      Rational t{};
      for (int r = 0; r < rep_m_; ++r)
        for (int c = 0; c < rep_m_; ++c)
          t = rat_add(t, rat_mul(rep_entry(i, r, c), rep_entry(j, r, c)));
      if (i == j) {
        if (t.is_zero()) throw SchemaError("rep basis element with zero trace norm");
        rep_norm_[static_cast<size_t>(i)] = t;
      } else if (!t.is_zero()) {
        throw SchemaError("rep basis is not trace-orthogonal");
      }
    }
  }

  if (structure_constants) {
    c_ = std::move(*structure_constants);
    if (static_cast<int>(c_.size()) != dim_ * dim_ * dim_)
      throw SchemaError("structure constant size mismatch");
  } else {
    // Derive c^k_{ij} from rep commutators by trace-orthogonal projection.
    c_.assign(static_cast<size_t>(dim_ * dim_ * dim_), Rational{});
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        // commutator [rep_i, rep_j]
        std::vector<Rational> comm(static_cast<size_t>(rep_m_ * rep_m_), Rational{});
        for (int r = 0; r < rep_m_; ++r)
          for (int c = 0; c < rep_m_; ++c) {
            Rational acc{};
            for (int t = 0; t < rep_m_; ++t) {
              acc = rat_add(acc, rat_mul(rep_entry(i, r, t), rep_entry(j, t, c)));
              acc = rat_sub(acc, rat_mul(rep_entry(j, r, t), rep_entry(i, t, c)));
            }
            comm[static_cast<size_t>(r * rep_m_ + c)] = acc;
          }
        for (int k = 0; k < dim_; ++k) {
          Rational t{};
          for (int r = 0; r < rep_m_; ++r)
            for (int c = 0; c < rep_m_; ++c)
              t = rat_add(t, rat_mul(comm[static_cast<size_t>(r * rep_m_ + c)],
                                     rep_entry(k, r, c)));
          c_[static_cast<size_t>((i * dim_ + j) * dim_ + k)] =
              rat_div(t, rep_norm_[static_cast<size_t>(k)]);
        }
      }
  }

  Kinv_ = dim_ > 0 ? rational_inverse(K_, dim_) : std::vector<Rational>{};
}

Coeff LieAlgebra::bracket(const Coeff& a, const Coeff& b) const {
  Coeff out = zero_element();
  for (int k = 0; k < dim_; ++k) {
    Scalar acc = Scalar::constant(0);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        Rational c = structure_constant(k, i, j);
        if (c.is_zero()) continue;
        acc = acc + Scalar::constant(c) * a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
      }
    out[static_cast<size_t>(k)] = acc;
  }
  return out;
}

Scalar LieAlgebra::pairing(const Coeff& a, const Coeff& b) const {
  Scalar acc = Scalar::constant(0);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      Rational kij = pairing_entry(i, j);
      if (kij.is_zero()) continue;
      acc = acc + Scalar::constant(kij) * a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
    }
  return acc;
}

Coeff LieAlgebra::k_dual(const Coeff& functional) const {
  Coeff out = zero_element();
  for (int i = 0; i < dim_; ++i) {
    Scalar acc = Scalar::constant(0);
    for (int j = 0; j < dim_; ++j) {
      Rational e = pairing_inverse_entry(i, j);
      if (e.is_zero()) continue;
      acc = acc + Scalar::constant(e) * functional[static_cast<size_t>(j)];
    }
    out[static_cast<size_t>(i)] = acc;
  }
  return out;
}

std::vector<Scalar> LieAlgebra::to_matrix(const Coeff& a) const {
  std::vector<Scalar> out(static_cast<size_t>(rep_m_ * rep_m_), Scalar::constant(0));
  for (int k = 0; k < dim_; ++k)
    for (int r = 0; r < rep_m_; ++r)
      for (int c = 0; c < rep_m_; ++c) {
        Rational e = rep_entry(k, r, c);
        if (e.is_zero()) continue;
        out[static_cast<size_t>(r * rep_m_ + c)] =
            out[static_cast<size_t>(r * rep_m_ + c)] + Scalar::constant(e) * a[static_cast<size_t>(k)];
      }
  return out;
}

Coeff LieAlgebra::from_matrix(const std::vector<Scalar>& mat) const {
  if (static_cast<int>(mat.size()) != rep_m_ * rep_m_)
    throw ConversionError("matrix size mismatch in algebra projection");
  Coeff out = zero_element();
  for (int k = 0; k < dim_; ++k) {
    Scalar acc = Scalar::constant(0);
    for (int r = 0; r < rep_m_; ++r)
      for (int c = 0; c < rep_m_; ++c) {
        Rational e = rep_entry(k, r, c);
        if (e.is_zero()) continue;
        acc = acc + Scalar::constant(e) * mat[static_cast<size_t>(r * rep_m_ + c)];
      }
    out[static_cast<size_t>(k)] =
        acc * Scalar::constant(rat_div(Rational::integer(1), rep_norm_[static_cast<size_t>(k)]));
  }
  return out;
}

Coeff LieAlgebra::basis_element(int k) const {
  Coeff out = zero_element();
  out[static_cast<size_t>(k)] = Scalar::constant(1);
  return out;
}

std::vector<CheckResult> LieAlgebra::validate(double tol) const {
  std::vector<CheckResult> out;
  auto push = [&](const std::string& tag, double residual) {
    CheckResult r;
    r.tag = tag;
    r.location = "algebra";
    r.residual = residual;
    r.tol = tol;
    r.pass = residual <= tol;
    out.push_back(std::move(r));
  };

  double r_anti = 0, r_jacobi = 0, r_ksym = 0, r_inv = 0, r_rep = 0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      for (int k = 0; k < dim_; ++k)
        r_anti = std::max(r_anti, std::abs(structure_constant(k, i, j).value() +
                                           structure_constant(k, j, i).value()));
      r_ksym = std::max(r_ksym,
                        std::abs(pairing_entry(i, j).value() - pairing_entry(j, i).value()));
    }
  // Jacobi and invariance on basis triples, rep commutators against c.
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) {
        for (int m = 0; m < dim_; ++m) {
          double s = 0;
          for (int l = 0; l < dim_; ++l) {
            s += structure_constant(l, j, k).value() * structure_constant(m, i, l).value();
            s += structure_constant(l, k, i).value() * structure_constant(m, j, l).value();
            s += structure_constant(l, i, j).value() * structure_constant(m, k, l).value();
          }
          r_jacobi = std::max(r_jacobi, std::abs(s));
        }
        double inv = 0;
        for (int l = 0; l < dim_; ++l) {
          inv += structure_constant(l, i, j).value() * pairing_entry(l, k).value();
          inv += structure_constant(l, i, k).value() * pairing_entry(j, l).value();
        }
        r_inv = std::max(r_inv, std::abs(inv));
      }
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int r = 0; r < rep_m_; ++r)
        for (int c = 0; c < rep_m_; ++c) {
          double comm = 0;
          for (int t = 0; t < rep_m_; ++t)
            comm += rep_entry(i, r, t).value() * rep_entry(j, t, c).value() -
                    rep_entry(j, r, t).value() * rep_entry(i, t, c).value();
          double lin = 0;
          for (int k = 0; k < dim_; ++k)
            lin += structure_constant(k, i, j).value() * rep_entry(k, r, c).value();
          r_rep = std::max(r_rep, std::abs(comm - lin));
        }

  push("algebra.antisymmetry", r_anti);
  push("algebra.jacobi", r_jacobi);
  push("algebra.pairing-symmetric", r_ksym);
  push("algebra.pairing-invariance", r_inv);
  push("algebra.rep-consistency", r_rep);
  return out;
}

LieAlgebra LieAlgebra::so(int n) {
  if (n < 2 || n > 4) throw SchemaError("so(n) builtin supports n in {2,3,4}");
  std::vector<std::string> names;
  std::vector<Rational> rep;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      names.push_back("e" + std::to_string(a) + std::to_string(b));
      std::vector<Rational> m(static_cast<size_t>(n * n), Rational{});
      m[static_cast<size_t>(a * n + b)] = Rational::integer(1);
      m[static_cast<size_t>(b * n + a)] = Rational::integer(-1);
      rep.insert(rep.end(), m.begin(), m.end());
    }
  int d = static_cast<int>(names.size());
  // K = -1/2 tr(XY); on this basis that is the identity matrix.
  std::vector<Rational> K(static_cast<size_t>(d * d), Rational{});
  for (int i = 0; i < d; ++i) K[static_cast<size_t>(i * d + i)] = Rational::integer(1);
  return LieAlgebra(std::move(names), n, std::move(rep), std::move(K));
}

LieAlgebra LieAlgebra::so4_mixed(Rational alpha, Rational beta) {
  LieAlgebra base = so(4);
  int d = base.dim();
  // Basis order: e01,e02,e03,e12,e13,e23. Pfaffian pairs complementary index pairs
  // with the permutation sign of (a b c d): (01,23)->+1, (02,13)->-1, (03,12)->+1.
  std::vector<Rational> K(static_cast<size_t>(d * d), Rational{});
  for (int i = 0; i < d; ++i)
    K[static_cast<size_t>(i * d + i)] = alpha;
  auto set_pf = [&](int i, int j, long long s) {
    K[static_cast<size_t>(i * d + j)] = rat_add(K[static_cast<size_t>(i * d + j)],
                                                rat_mul(beta, Rational::integer(s)));
    K[static_cast<size_t>(j * d + i)] = K[static_cast<size_t>(i * d + j)];
  };
  set_pf(0, 5, 1);   // e01 ~ e23
  set_pf(1, 4, -1);  // e02 ~ e13
  set_pf(2, 3, 1);   // e03 ~ e12
  std::vector<Rational> rep;
  std::vector<std::string> names = base.basis_names();
  for (int k = 0; k < d; ++k)
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) rep.push_back(base.rep_entry(k, r, c));
  return LieAlgebra(std::move(names), 4, std::move(rep), std::move(K));
}

LieAlgebra LieAlgebra::abelian(int k) {
  std::vector<std::string> names;
  std::vector<Rational> rep;
  for (int i = 0; i < k; ++i) {
    names.push_back("a" + std::to_string(i));
    std::vector<Rational> m(static_cast<size_t>(k * k), Rational{});
    m[static_cast<size_t>(i * k + i)] = Rational::integer(1);
    rep.insert(rep.end(), m.begin(), m.end());
  }
  std::vector<Rational> K(static_cast<size_t>(k * k), Rational{});
  for (int i = 0; i < k; ++i) K[static_cast<size_t>(i * k + i)] = Rational::integer(1);
  return LieAlgebra(std::move(names), std::max(k, 1), std::move(rep), std::move(K));
}

LieAlgebra LieAlgebra::zero_algebra() { return LieAlgebra({}, 1, {}, {}); }

LieAlgebra LieAlgebra::builtin(const std::string& name) {
  if (name == "so2") return so(2);
  if (name == "so3") return so(3);
  if (name == "so4") return so(4);
  if (name == "so4_mixed") return so4_mixed(Rational::integer(1), Rational(1, 2));
  if (name == "abelian1") return abelian(1);
  if (name == "abelian2") return abelian(2);
  if (name == "zero") return zero_algebra();
  throw SchemaError("unknown builtin algebra '" + name + "'");
}

// ---------------------------------------------------------------------------
// Wedge variants and Chern-Simons
// ---------------------------------------------------------------------------

Form wedge_K(const Form& a, const Form& b, const LieAlgebra& g) {
  if (a.space() != CoeffSpace::Lie || b.space() != CoeffSpace::Lie ||
      a.coeff_len() != g.dim() || b.coeff_len() != g.dim())
    throw PairingMismatch("K-pairing wedge needs matching Lie-valued forms");
  return wedge_with(a, b, CoeffSpace::Scalar, 1,
                    [&g](const Coeff& x, const Coeff& y) { return Coeff{g.pairing(x, y)}; });
}

Form wedge_bracket(const Form& a, const Form& b, const LieAlgebra& g) {
  if (a.space() != CoeffSpace::Lie || b.space() != CoeffSpace::Lie ||
      a.coeff_len() != g.dim() || b.coeff_len() != g.dim())
    throw PairingMismatch("bracket wedge needs matching Lie-valued forms");
  return wedge_with(a, b, CoeffSpace::Lie, g.dim(),
                    [&g](const Coeff& x, const Coeff& y) { return g.bracket(x, y); });
}

Form wedge_rule(const Form& a, const Form& b, PairingRule rule, const LieAlgebra* g) {
  switch (rule) {
    case PairingRule::ScalarMul:
      if (a.space() == CoeffSpace::Scalar && b.space() != CoeffSpace::Scalar)
        return wedge_scale(a, b);
      return wedge(a, b);
    case PairingRule::KPairing:
      if (!g) throw PairingMismatch("K-pairing rule needs an algebra");
      return wedge_K(a, b, *g);
    case PairingRule::LieBracket:
      if (!g) throw PairingMismatch("bracket rule needs an algebra");
      return wedge_bracket(a, b, *g);
    case PairingRule::MatrixMul:
      return wedge_matrix(a, b);
  }
  throw PairingMismatch("unknown pairing rule");
}

Form curvature_form(const Form& theta, const LieAlgebra& g) {
  return theta.d() + wedge_bracket(theta, theta, g).scaled(Rational(1, 2));
}

Form cs3(const Form& theta, const LieAlgebra& g) {
  if (theta.degree() != 1 || theta.space() != CoeffSpace::Lie)
    throw PairingMismatch("cs3 expects a Lie-valued 1-form");
  return wedge_K(theta, theta.d(), g) +
         wedge_K(theta, wedge_bracket(theta, theta, g), g).scaled(Rational(1, 3));
}

Form lie_zero_form(const ChartPtr& chart, int degree, const LieAlgebra& g) {
  return Form(chart, degree, CoeffSpace::Lie, g.dim());
}

}  // namespace ck
