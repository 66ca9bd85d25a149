#pragma once

#include "courantkit/stringdata.hpp"

namespace ck {

// Image of string data on the Courant side, with the inner-automorphism
// witnesses (gbar_ij, recovered omega_ij) of each transition.
struct PhiOutput {
  CourantData courant;
  std::map<std::vector<int>, InnerAuto> witnesses;
};

// The object map: phi_ij = -gbar* theta_MC, tau_ij = Ad_gbar, and
// beta_ij = -(gbar* theta_MC, theta_i)^K + dA_ij + omega2_ij
//           - (gbar* theta_MC)* o gbar* theta_MC.
PhiOutput phi_object(const StringData& data, const Tolerances& tol = Tolerances{});

// Curvature preservation: string curvature vs the glued Courant curvature.
std::vector<CheckResult> phi_curvature_check(const StringData& data,
                                             const Tolerances& tol = Tolerances{},
                                             ExecMode mode = default_mode());

// Image of a string 1-morphism: per-chart automorphisms with the same shape.
std::vector<CourantAuto> phi_1morphism(const StringMorphism& m, const StringData& source,
                                       const StringData& target,
                                       const Tolerances& tol = Tolerances{});

// U(1)-gerbe data with connection: curvings B_i, connections A_ij, cocycle a.
struct GerbeData {
  const Cover* cover = nullptr;
  std::vector<Form> B;
  std::map<std::vector<int>, Form> A;
  CircleCochain a;  // cech degree 2
};

std::vector<CheckResult> validate_gerbe(const GerbeData& data,
                                        const Tolerances& tol = Tolerances{},
                                        ExecMode mode = default_mode());

// Edge map on the abelian side: (B_i; A_ij; a_ijk) -> exact data with
// transition 2-forms dA_ij.
ExactData phi_u1(const GerbeData& data, const Tolerances& tol = Tolerances{});

// Inclusion of gerbe data into string data: theta = 0, gbar = 1, omega2 = 0.
StringData embed_gerbe_in_string(const GerbeData& data, AlgPtr alg,
                                 const Tolerances& tol = Tolerances{});

// Edge map on the bundle side: (theta_i; gbar_ij) -> transitive Lie data with
// phi_ij = -gbar* theta_MC and tau = Ad.
LieData phi_spin(const Cover& cover, AlgPtr alg, const std::vector<Form>& theta,
                 const std::map<std::vector<int>, GroupMap>& gbar,
                 const Tolerances& tol = Tolerances{});

}  // namespace ck
