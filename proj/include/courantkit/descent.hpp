#pragma once

#include "courantkit/cech.hpp"
#include "courantkit/courant.hpp"

namespace ck {

// Local standard Lie-algebroid pieces glued by (phi_ij, tau_ij) over a cover.
struct LieData {
  const Cover* cover = nullptr;
  AlgPtr alg;
  std::vector<Form> theta;                    // per chart, Lie-valued 1-form
  std::map<std::vector<int>, Form> phi;       // per pair overlap
  std::map<std::vector<int>, TauField> tau;   // per pair overlap

  const Form& phi_at(const std::vector<int>& ij) const;
  const TauField& tau_at(const std::vector<int>& ij) const;
};

// Courant descent data: Lie data plus per-chart 2-forms and per-overlap
// (0,2)-tensors completing the transition automorphisms.
struct CourantData {
  LieData lie;
  std::vector<Form> B;
  std::map<std::vector<int>, std::vector<std::vector<Scalar>>> beta;

  const Cover& cover() const { return *lie.cover; }
  const LieAlgebra& alg() const { return *lie.alg; }
  // The transition automorphism of the overlap, all parts restricted there.
  CourantAuto transition(const std::vector<int>& ij) const;
};

// Exact case: per-chart 2-forms glued by closed B-field shifts.
struct ExactData {
  const Cover* cover = nullptr;
  std::vector<Form> B;
  std::map<std::vector<int>, Form> curly;  // closed 2-form per pair overlap
};

struct GluedCourant {
  std::vector<CourantParams> params;  // per chart
  std::vector<Form> p1;               // per-chart first Pontryagin 4-forms
  std::vector<CheckResult> certificates;
};

// Restriction of per-chart data to an overlap: pullback along the face that
// keeps the given position.
Form restrict_to(const Cover& cover, const std::vector<int>& overlap, size_t position,
                 const Form& chart_form);

std::vector<CheckResult> validate_lie_data(const LieData& data,
                                           const Tolerances& tol = Tolerances{},
                                           ExecMode mode = default_mode());

// Per-chart curvature d theta + 1/2 [theta, theta] with the overlap gluing
// certificate tau_ij R_j = R_i. Throws GlueFailure when gluing fails.
std::vector<Form> curvature_R(const LieData& data, const Tolerances& tol = Tolerances{});

// (R_i, R_i)^K with overlap agreement certificates.
std::vector<Form> pontryagin_p1(const LieData& data, const Tolerances& tol = Tolerances{});

// Residuals of dH = (R,R)^K per chart plus overlap agreement of H.
std::vector<CheckResult> check_p1_trivialized(const LieData& data, const std::vector<Form>& H,
                                              const Tolerances& tol = Tolerances{},
                                              ExecMode mode = default_mode());

// The Courant lift: beta_ij is read off the B-difference transition identity.
// Precondition (the obstruction): cs3(theta_i) - dB_i agree on overlaps.
CourantData lift_courant_from_lie(const LieData& data, std::vector<Form> B,
                                  const Tolerances& tol = Tolerances{});

std::vector<CheckResult> validate_courant_data(const CourantData& data,
                                               const Tolerances& tol = Tolerances{},
                                               ExecMode mode = default_mode());

// Appendix-style gluing: per-chart connection/curvature/twist parameters with
// certificates (connection match, curvature glue, twist agreement, Bianchi,
// splitting isotropy, and the conjugation identity against the general
// bracket). Throws GlueFailure when a certificate fails.
GluedCourant glue_courant(const CourantData& data, const Tolerances& tol = Tolerances{},
                          ExecMode mode = default_mode(), int section_pairs = 6);

// Curvature 3-forms cs3(theta_i) - dB_i without the full gluing sweep.
std::vector<Form> courant_curvature(const CourantData& data);

// Twist shift by per-chart 2-forms whose differentials glue to a closed global
// 3-form: (theta, B + Bh; phi, tau, beta + Bh_j - Bh_i).
CourantData torsor_action_h(const CourantData& data, const std::vector<Form>& Bh,
                            const Tolerances& tol = Tolerances{});

// Difference of two lifts over the same Lie data, returned as the per-chart
// 2-forms B'_i - B_i (the torsor transitivity witness).
std::vector<Form> torsor_difference(const CourantData& a, const CourantData& b);

std::vector<CheckResult> validate_courant_1morphism(const CourantData& source,
                                                    const CourantData& target,
                                                    const std::vector<CourantAuto>& lambda,
                                                    const Tolerances& tol = Tolerances{},
                                                    ExecMode mode = default_mode());

LieData project_courant_to_lie(const CourantData& data);

// Exact Courant data over the cover.
std::vector<CheckResult> validate_exact_data(const ExactData& data,
                                             const Tolerances& tol = Tolerances{},
                                             ExecMode mode = default_mode());
// Glued curvature h_i = -dB_i; the sign is pinned by the splitting bracket
// oracle [s(X), s(Y)] - s([X,Y]) exercised in the test suite.
std::vector<Form> exact_glued_curvature(const ExactData& data,
                                        const Tolerances& tol = Tolerances{});
ExactData exact_b_field(const ExactData& data, const std::vector<Form>& b,
                        const Tolerances& tol = Tolerances{});
CourantData embed_exact_in_transitive(const ExactData& data, AlgPtr alg = nullptr);

}  // namespace ck
