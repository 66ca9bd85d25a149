#pragma once

#include "courantkit/groupmap.hpp"

namespace ck {

using AlgPtr = std::shared_ptr<const LieAlgebra>;

// Section X + a + xi of TU + (U x g) + T*U.
struct Section {
  VecField X;
  Coeff a;   // algebra coordinates
  Form xi;   // scalar 1-form

  static Section zero(const ChartPtr& chart, const LieAlgebra& alg);
  friend Section operator+(const Section&, const Section&);
  friend Section operator-(const Section&, const Section&);
};

// Connection/curvature/twist data for the general transitive bracket. The
// connection is carried by theta through grad_X a = X(a) + [theta(X), a].
struct CourantParams {
  AlgPtr alg;
  Form theta;  // Lie-valued 1-form
  Form R;      // Lie-valued 2-form
  Form H;      // scalar 3-form

  static CourantParams standard(const ChartPtr& chart, AlgPtr alg);
  // Residuals of the construction contract R = d theta + 1/2 [theta, theta]
  // and dH = (R, R)^K.
  std::vector<CheckResult> validate(const Tolerances& tol = Tolerances{}) const;

  Coeff theta_of(const VecField& X) const;          // theta(X)
  Coeff nabla(const VecField& X, const Coeff& a) const;  // X(a) + [theta(X), a]
};

Scalar pairing(const LieAlgebra& alg, const Section& e1, const Section& e2);

// Standard transitive Courant bracket:
// [X,Y] + X(b) - Y(a) + [a,b] + L_X eta - i_Y d xi + P0(a,b),
// with P0(a,b)(Z) = 2 (b, Z(a))^K.
Section bracket_standard(const LieAlgebra& alg, const Section& e1, const Section& e2);

// General bracket with connection, curvature and 3-form twist:
// ... + grad_X b - grad_Y a + [a,b] + R(X,Y) + P(a,b) - 2 Q(X,b) + 2 Q(Y,a) + H(X,Y,.).
Section bracket_general(const CourantParams& p, const Section& e1, const Section& e2);

using BracketFn = std::function<Section(const Section&, const Section&)>;

// Deterministic section pool: every fiber direction with cycled monomial
// coefficients of degree <= 2, plus a few dense sections.
std::vector<Section> generate_test_sections(const ChartPtr& chart, const LieAlgebra& alg,
                                            uint64_t seed = kDefaultSeed);

// Residual sweep of the three Courant axioms over seeded triples from the pool.
std::vector<CheckResult> check_courant_axioms(const LieAlgebra& alg, const BracketFn& bracket,
                                              const std::vector<Section>& sections,
                                              int triple_count = 24,
                                              const Tolerances& tol = Tolerances{},
                                              ExecMode mode = default_mode());

// Fiberwise algebra automorphism: Ad of a group map, or an explicit matrix field.
class TauField {
 public:
  static TauField ad(GroupMap g);
  static TauField explicit_matrix(ChartPtr chart, int dim, std::vector<Scalar> matrix);
  static TauField identity(const ChartPtr& chart);

  bool is_ad() const { return g_.has_value(); }
  const GroupMap& group() const;
  const ChartPtr& chart() const { return chart_; }

  Coeff apply(const LieAlgebra& alg, const Coeff& a) const;
  Form apply_form(const LieAlgebra& alg, const Form& omega) const;
  TauField inverse() const;
  TauField compose(const LieAlgebra& alg, const TauField& other) const;  // this after other
  TauField pulled_back(const SmoothMap& f) const;

  // K-orthogonality and bracket-automorphism residuals on basis elements.
  std::vector<CheckResult> validate(const LieAlgebra& alg,
                                    const Tolerances& tol = Tolerances{}) const;

 private:
  TauField() = default;
  ChartPtr chart_;
  std::optional<GroupMap> g_;
  std::vector<Scalar> matrix_;  // dim x dim when explicit
  int dim_ = 0;
};

// Automorphism of the standard transitive Courant algebroid, stored as
// (phi, tau, beta) with beta a full (0,2)-tensor beta(X)(Y) = beta_{mu nu} X^mu Y^nu.
struct CourantAuto {
  Form phi;  // Lie-valued 1-form
  TauField tau;
  std::vector<std::vector<Scalar>> beta;  // beta[mu][nu]

  static CourantAuto identity(const ChartPtr& chart, const LieAlgebra& alg);
  const ChartPtr& chart() const { return phi.chart(); }

  Form beta_of(const VecField& X) const;               // 1-form beta(X)
  Form beta_two_form() const;                          // antisymmetric part as a 2-form
  std::vector<std::vector<Scalar>> beta_sym() const;   // symmetric part

  CourantAuto pulled_back(const SmoothMap& f, const LieAlgebra& alg) const;
};

Section auto_apply(const LieAlgebra& alg, const CourantAuto& L, const Section& e);

// Compatibility conditions of the automorphism matrix plus bracket/pairing
// preservation over a generated section set.
std::vector<CheckResult> auto_validate(const LieAlgebra& alg, const CourantAuto& L,
                                       const Tolerances& tol = Tolerances{},
                                       ExecMode mode = default_mode(), int pair_count = 10);

CourantAuto auto_compose(const LieAlgebra& alg, const CourantAuto& L1, const CourantAuto& L2);
CourantAuto auto_inverse(const LieAlgebra& alg, const CourantAuto& L);

// Pointwise entry comparison of two automorphisms (phi, tau on basis, beta).
IdentityReport auto_identity(const LieAlgebra& alg, const CourantAuto& A, const CourantAuto& B,
                             double tol = 1e-9);

// Severa inner automorphism of the pair (g, omega).
struct InnerAuto {
  GroupMap g;
  Form omega;  // scalar 2-form
};

// Residual of the inner-automorphism constraint d omega + (1/6) (A,[A,A])^K = 0,
// the normalized Cartan-form pullback.
IdentityReport gw_residual(const InnerAuto& in, const LieAlgebra& alg,
                           const Tolerances& tol = Tolerances{});

// Matrix form of (g, omega): phi = -g*theta_MC, tau = Ad_g,
// beta = omega - (g*theta_MC)* о g*theta_MC. Throws GWViolation when the
// constraint fails at samples.
CourantAuto inner_auto(const InnerAuto& in, const LieAlgebra& alg,
                       const Tolerances& tol = Tolerances{});

// Group law on pairs: (g1, w1)(g2, w2) = (g1 g2, w1 + w2 + (A1, Ad_{g1} A2)^K).
InnerAuto inner_compose(const InnerAuto& a, const InnerAuto& b, const LieAlgebra& alg,
                        const Tolerances& tol = Tolerances{});
InnerAuto inner_inverse(const InnerAuto& a, const LieAlgebra& alg);

// Action Courant bracket on k-valued fields:
// [s1,s2]_k + L_{rho(s1)} s2 - L_{rho(s2)} s1 + rho^* (d s1, s2)^K.
struct ActionStructure {
  AlgPtr alg_k;
  std::vector<VecField> rho;  // image of each basis element

  VecField anchor(const Coeff& s) const;
  // [rho(e_a), rho(e_b)] = rho([e_a, e_b]) at samples; throws ActionViolation.
  void check_action_property(const Tolerances& tol = Tolerances{}) const;
};

Coeff action_courant_bracket(const ActionStructure& act, const Coeff& s1, const Coeff& s2);

}  // namespace ck
