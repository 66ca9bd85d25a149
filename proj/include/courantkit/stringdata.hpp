#pragma once

#include "courantkit/descent.hpp"

namespace ck {

// Local tuple determining a string principal bundle with connection data:
// per-chart (theta_i, B_i), per-overlap (gbar_ij, A_ij, omega2_ij), per-triple
// (f_ijk, omega1_ijk), and the optional quadruple-level circle cochain F.
struct StringData {
  const Cover* cover = nullptr;
  AlgPtr alg;
  std::vector<Form> theta;  // per chart, Lie-valued 1-forms
  std::vector<Form> B;      // per chart 2-forms
  std::map<std::vector<int>, GroupMap> gbar;
  std::map<std::vector<int>, Form> A;       // 1-forms per pair
  std::map<std::vector<int>, Form> omega2;  // 2-forms per pair
  CircleCochain f;                          // cech degree 2
  FormCochain omega1;                       // cech degree 2, form degree 1
  CircleCochain Fc;                         // cech degree 3, defaults to zero

  const GroupMap& gbar_at(const std::vector<int>& ij) const;
  const Form& A_at(const std::vector<int>& ij) const;
  const Form& omega2_at(const std::vector<int>& ij) const;
};

// Depth-2 Deligne cocycle (f^h, A^h, B^h) acting on string data.
struct D2Cocycle {
  CircleCochain f;   // cech degree 2
  FormCochain A;     // cech degree 1, form degree 1
  FormCochain B;     // cech degree 0, form degree 2

  DeligneCochain as_deligne(const Cover& cover) const;
  static D2Cocycle zero(const Cover& cover);
  // Coboundary of (phi, alpha): (delta phi, delta alpha - dlog phi, d alpha).
  static D2Cocycle coboundary(const Cover& cover, const CircleCochain& phi,
                              const FormCochain& alpha);
  friend D2Cocycle operator+(const D2Cocycle&, const D2Cocycle&);
};

// A 1-morphism of string data: per-chart (g_i, A_i, omega2_i) and per-pair
// (f_ij, omega1_ij).
struct StringMorphism {
  std::vector<GroupMap> g;
  std::vector<Form> A;       // per chart 1-forms
  std::vector<Form> omega2;  // per chart 2-forms
  CircleCochain f;           // cech degree 1
  FormCochain omega1;        // cech degree 1, form degree 1

  static StringMorphism identity(const Cover& cover, int rep_size);
};

std::vector<CheckResult> validate_string_data(const StringData& data,
                                              const Tolerances& tol = Tolerances{},
                                              ExecMode mode = default_mode());

// Per-chart curvature cs3(theta_i) - dB_i with overlap agreement; throws
// GlueFailure on mismatch.
std::vector<Form> string_curvature(const StringData& data, const Tolerances& tol = Tolerances{});

std::vector<CheckResult> validate_d2_cocycle(const D2Cocycle& h, const Cover& cover,
                                             const Tolerances& tol = Tolerances{},
                                             ExecMode mode = default_mode());

// (theta, B; g, A, f) -> (theta, B + B^h; g, A + A^h, f + f^h).
StringData deligne_action(const StringData& data, const D2Cocycle& h);

// Validates m as a 1-morphism from `source` to `target` (source carries the
// tilde data of the defining equations).
std::vector<CheckResult> validate_string_1morphism(const StringData& source,
                                                   const StringData& target,
                                                   const StringMorphism& m,
                                                   const Tolerances& tol = Tolerances{},
                                                   ExecMode mode = default_mode());

// The explicit morphism connecting P to D(phi,alpha) . P: (1, -alpha, 0; phi, 0).
StringMorphism coboundary_morphism(const StringData& data, const CircleCochain& phi,
                                   const FormCochain& alpha);

// Detector for the isomorphism-inducing condition on a cocycle h, given
// morphism data from h.P to P.
std::vector<CheckResult> check_iso_condition(const D2Cocycle& h, const StringData& data,
                                             const StringMorphism& m,
                                             const Tolerances& tol = Tolerances{},
                                             ExecMode mode = default_mode());

// Underlying bundle-with-connection checks: the Maurer-Cartan transition and
// the strict cocycle condition of gbar.
std::vector<CheckResult> validate_spin_data(const Cover& cover, const LieAlgebra& alg,
                                            const std::vector<Form>& theta,
                                            const std::map<std::vector<int>, GroupMap>& gbar,
                                            const Tolerances& tol = Tolerances{},
                                            ExecMode mode = default_mode());

// Builds the determined tail (omega2, omega1, F) from seeds so the descent
// staircase holds by construction. theta/gbar must already satisfy the
// Maurer-Cartan transition; B/A/f are free seeds.
StringData build_string_data(const Cover& cover, AlgPtr alg, std::vector<Form> theta,
                             std::vector<Form> B, std::map<std::vector<int>, GroupMap> gbar,
                             std::map<std::vector<int>, Form> A, CircleCochain f,
                             const Tolerances& tol = Tolerances{});

// Forgetful projection onto the spin part (theta, gbar).
struct SpinData {
  std::vector<Form> theta;
  std::map<std::vector<int>, GroupMap> gbar;
};
SpinData project_string_to_spin(const StringData& data);

}  // namespace ck
