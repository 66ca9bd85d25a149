#pragma once

#include <nlohmann/json_fwd.hpp>

#include "courantkit/phi.hpp"

namespace ck {

// A materialized scenario: cover, algebra, and whichever data sections the
// file provides. Charts are shared objects; everything referencing them uses
// pointer identity.
struct Scenario {
  std::string name;
  Tolerances tol;
  std::shared_ptr<const Cover> cover;
  AlgPtr alg;

  std::optional<LieData> lie_data;
  std::optional<CourantData> courant_data;
  std::optional<ExactData> exact_data;
  std::optional<StringData> string_data;
  std::optional<GerbeData> gerbe_data;

  std::vector<std::pair<std::string, GroupMap>> group_maps;  // mc-identity suite
  std::vector<Form> torsor_Bh;                               // per chart, optional
  std::vector<Form> lift_B;                                  // seeds for the lift
  std::optional<D2Cocycle> d2;                               // string torsor input
  // coboundary generators for the string torsor morphism, when provided
  std::optional<CircleCochain> cob_phi;
  std::optional<FormCochain> cob_alpha;

  std::map<std::string, std::string> notes;
};

Scenario scenario_from_json(const nlohmann::json& js);
Scenario load_scenario(const std::string& path);

// Builtin scenario generators; emit the JSON the loader accepts.
// Names: flat_r3, sphere_so3, torus_gerbe, r3_minus_two_points_abelian,
// four_dim_p1.
nlohmann::json generate_builtin(const std::string& name);
std::vector<std::string> builtin_names();

// Deterministic content hash of a scenario document (timestamp-free).
uint64_t scenario_hash(const nlohmann::json& js);

// Form/expression serialization helpers shared by generators and the loader.
nlohmann::json form_to_json(const Form& f);
Form form_from_json(const nlohmann::json& js, const ChartPtr& chart, const LieAlgebra* alg);

}  // namespace ck
