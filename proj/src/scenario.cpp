#include "courantkit/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace ck {

using nlohmann::json;

namespace {

std::string key_str(const std::vector<int>& idx) {
  std::string s;
  for (size_t i = 0; i < idx.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(idx[i]);
  }
  return s;
}

std::vector<int> parse_key(const std::string& key) {
  std::vector<int> out;
  std::stringstream ss(key);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

std::string multi_index_key(const MultiIndex& idx) {
  std::string s;
  for (size_t i = 0; i < idx.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(idx[i]);
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Forms and charts <-> JSON
// ---------------------------------------------------------------------------

nlohmann::json form_to_json(const Form& f) {
  json js;
  js["degree"] = f.degree();
  js["space"] = f.space() == CoeffSpace::Scalar ? "scalar"
                : f.space() == CoeffSpace::Lie  ? "lie"
                                                : "matrix";
  json coeffs = json::object();
  for (const auto& [idx, c] : f.coeffs()) {
    if (f.space() == CoeffSpace::Scalar) {
      coeffs[multi_index_key(idx)] = c[0].str();
    } else {
      json arr = json::array();
      for (const auto& s : c) arr.push_back(s.str());
      coeffs[multi_index_key(idx)] = arr;
    }
  }
  js["coeffs"] = coeffs;
  return js;
}

Form form_from_json(const nlohmann::json& js, const ChartPtr& chart, const LieAlgebra* alg) {
  int degree = js.at("degree").get<int>();
  std::string space_s = js.value("space", "scalar");
  CoeffSpace space = space_s == "scalar" ? CoeffSpace::Scalar
                     : space_s == "lie"  ? CoeffSpace::Lie
                                         : CoeffSpace::Matrix;
  int coeff_len = 1;
  if (space == CoeffSpace::Lie) {
    if (!alg) throw SchemaError("lie-valued form needs an algebra in scope");
    coeff_len = alg->dim();
  } else if (space == CoeffSpace::Matrix) {
    if (!alg) throw SchemaError("matrix-valued form needs an algebra in scope");
    coeff_len = alg->rep_size() * alg->rep_size();
  }
  Form f(chart, degree, space, coeff_len);
  if (js.contains("coeffs")) {
    for (const auto& [key, val] : js.at("coeffs").items()) {
      MultiIndex idx;
      if (!key.empty())
        for (int v : parse_key(key)) idx.push_back(v);
      Coeff c;
      if (val.is_string()) {
        c.push_back(parse_expr(val.get<std::string>(), chart));
      } else {
        for (const auto& e : val) c.push_back(parse_expr(e.get<std::string>(), chart));
      }
      if (static_cast<int>(c.size()) != coeff_len)
        throw SchemaError("form coefficient arity mismatch at '" + key + "'");
      f.add_term(idx, std::move(c));
    }
  }
  return f;
}

namespace {

json chart_to_json(const ChartPtr& chart) {
  json js;
  js["name"] = chart->name();
  js["coords"] = chart->coords();
  js["samples"] = chart->samples();
  if (chart->box()) {
    js["box"] = {{"lo", chart->box()->lo}, {"hi", chart->box()->hi}};
  }
  return js;
}

ChartPtr chart_from_json(const json& js) {
  std::optional<Box> box;
  if (js.contains("box"))
    box = Box{js.at("box").at("lo").get<std::vector<double>>(),
              js.at("box").at("hi").get<std::vector<double>>()};
  return make_chart(js.at("name").get<std::string>(),
                    js.at("coords").get<std::vector<std::string>>(),
                    js.at("samples").get<std::vector<std::vector<double>>>(), std::move(box));
}

json groupmap_to_json(const GroupMap& g) {
  json m = json::array();
  for (int r = 0; r < g.size(); ++r) {
    json row = json::array();
    for (int c = 0; c < g.size(); ++c) row.push_back(g.entry(r, c).str());
    m.push_back(row);
  }
  return json{{"tag", g.tag() == GroupMap::Tag::SO ? "SO" : "general"}, {"matrix", m}};
}

GroupMap groupmap_from_json(const json& js, const ChartPtr& chart) {
  const json& m = js.at("matrix");
  int n = static_cast<int>(m.size());
  std::vector<Scalar> mat;
  mat.reserve(static_cast<size_t>(n * n));
  for (const auto& row : m)
    for (const auto& e : row) mat.push_back(parse_expr(e.get<std::string>(), chart));
  GroupMap::Tag tag =
      js.value("tag", "SO") == std::string("SO") ? GroupMap::Tag::SO : GroupMap::Tag::General;
  return GroupMap(chart, n, std::move(mat), tag);
}

json tau_to_json(const TauField& tau, const LieAlgebra& alg) {
  if (tau.is_ad()) return json{{"type", "ad"}, {"g", groupmap_to_json(tau.group())}};
  json m = json::array();
  for (int i = 0; i < alg.dim(); ++i) {
    json row = json::array();
    Coeff col = tau.apply(alg, alg.basis_element(i));
    (void)col;
    row.push_back("0");
    m.push_back(row);
  }
  throw SchemaError("explicit tau serialization is not supported");
}

TauField tau_from_json(const json& js, const ChartPtr& chart, const LieAlgebra& alg) {
  std::string type = js.value("type", "ad");
  if (type == "ad") return TauField::ad(groupmap_from_json(js.at("g"), chart));
  const json& m = js.at("matrix");
  std::vector<Scalar> mat;
  for (const auto& row : m)
    for (const auto& e : row) mat.push_back(parse_expr(e.get<std::string>(), chart));
  return TauField::explicit_matrix(chart, alg.dim(), std::move(mat));
}

json rational_json(const Rational& r) {
  if (r.den == 1) return json(r.num);
  return json(std::to_string(r.num) + "/" + std::to_string(r.den));
}

Rational rational_from_json(const json& js) {
  if (js.is_number_integer()) return Rational::integer(js.get<long long>());
  if (js.is_number_float()) {
    double v = js.get<double>();
    long long den = 1;
    while (std::abs(v * den - std::round(v * den)) > 1e-12 && den < (1ll << 40)) den *= 10;
    return Rational(static_cast<long long>(std::round(v * den)), den);
  }
  std::string s = js.get<std::string>();
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational::integer(std::stoll(s));
  return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

json algebra_to_json(const LieAlgebra& alg, const std::string& builtin_name) {
  if (!builtin_name.empty()) return json(builtin_name);
  json js;
  js["basis"] = alg.basis_names();
  js["rep_size"] = alg.rep_size();
  json rep = json::array();
  for (int k = 0; k < alg.dim(); ++k) {
    json m = json::array();
    for (int r = 0; r < alg.rep_size(); ++r) {
      json row = json::array();
      for (int c = 0; c < alg.rep_size(); ++c) row.push_back(rational_json(alg.rep_entry(k, r, c)));
      m.push_back(row);
    }
    rep.push_back(m);
  }
  js["rep"] = rep;
  json K = json::array();
  for (int i = 0; i < alg.dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < alg.dim(); ++j) row.push_back(rational_json(alg.pairing_entry(i, j)));
    K.push_back(row);
  }
  js["pairing"] = K;
  return js;
}

AlgPtr algebra_from_json(const json& js) {
  if (js.is_string())
    return std::make_shared<const LieAlgebra>(LieAlgebra::builtin(js.get<std::string>()));
  std::vector<std::string> basis = js.at("basis").get<std::vector<std::string>>();
  int m = js.at("rep_size").get<int>();
  std::vector<Rational> rep;
  for (const auto& mat : js.at("rep"))
    for (const auto& row : mat)
      for (const auto& e : row) rep.push_back(rational_from_json(e));
  std::vector<Rational> K;
  for (const auto& row : js.at("pairing"))
    for (const auto& e : row) K.push_back(rational_from_json(e));
  std::optional<std::vector<Rational>> c;
  if (js.contains("structure_constants")) {
    std::vector<Rational> cc;
    for (const auto& e : js.at("structure_constants")) cc.push_back(rational_from_json(e));
    c = std::move(cc);
  }
  return std::make_shared<const LieAlgebra>(LieAlgebra(basis, m, std::move(rep), std::move(K), c));
}

CircleCochain circle_from_json(const json& js, const Cover& cover, int degree) {
  CircleCochain out = CircleCochain::zero(cover, degree);
  for (const auto& [key, val] : js.items()) {
    std::vector<int> idx = parse_key(key);
    const ChartPtr& chart = cover.chart_of(idx);
    out.set(idx, parse_expr(val.get<std::string>(), chart));
  }
  return out;
}

json circle_to_json(const CircleCochain& c) {
  json js = json::object();
  for (const auto& [idx, lift] : c.lifts) js[key_str(idx)] = lift.str();
  return js;
}

FormCochain formcochain_from_json(const json& js, const Cover& cover, int cech_degree,
                                  int form_degree) {
  FormCochain out = FormCochain::zero(cover, cech_degree, form_degree);
  for (const auto& [key, val] : js.items()) {
    std::vector<int> idx = parse_key(key);
    out.set(idx, form_from_json(val, cover.chart_of(idx), nullptr));
  }
  return out;
}

json formcochain_to_json(const FormCochain& c) {
  json js = json::object();
  for (const auto& [idx, f] : c.comps) js[key_str(idx)] = form_to_json(f);
  return js;
}

}  // namespace

// ---------------------------------------------------------------------------
// Scenario loading
// ---------------------------------------------------------------------------

Scenario scenario_from_json(const json& js) {
  Scenario sc;
  sc.name = js.value("name", "scenario");
  if (js.contains("tolerances")) {
    const json& t = js.at("tolerances");
    sc.tol.identity = t.value("identity", sc.tol.identity);
    sc.tol.fd = t.value("finite_difference", sc.tol.fd);
    sc.tol.denom_floor = t.value("denom_floor", sc.tol.denom_floor);
    sc.tol.projection = t.value("projection", sc.tol.projection);
    sc.tol.mod1 = t.value("mod1", sc.tol.mod1);
    sc.tol.extra_points = t.value("extra_points", sc.tol.extra_points);
  }
  sc.tol.seed = js.value("seed", kDefaultSeed);
  if (js.contains("notes"))
    for (const auto& [k, v] : js.at("notes").items()) sc.notes[k] = v.get<std::string>();

  sc.alg = algebra_from_json(js.value("algebra", json("so3")));

  // cover
  const json& cj = js.at("cover");
  std::vector<ChartPtr> charts;
  for (const auto& c : cj.at("charts")) charts.push_back(chart_from_json(c));
  std::vector<Overlap> overlaps;
  if (cj.contains("overlaps")) {
    // two passes so faces of deep overlaps can target shallower overlap charts
    std::map<std::vector<int>, ChartPtr> ocharts;
    for (const auto& o : cj.at("overlaps"))
      ocharts.emplace(o.at("indices").get<std::vector<int>>(), chart_from_json(o.at("chart")));
    for (const auto& o : cj.at("overlaps")) {
      Overlap ov;
      ov.indices = o.at("indices").get<std::vector<int>>();
      ov.chart = ocharts.at(ov.indices);
      const json& faces = o.at("faces");
      for (size_t k = 0; k < faces.size(); ++k) {
        std::vector<int> sub;
        for (size_t i = 0; i < ov.indices.size(); ++i)
          if (i != k) sub.push_back(ov.indices[i]);
        ChartPtr target =
            sub.size() == 1 ? charts[static_cast<size_t>(sub[0])] : ocharts.at(sub);
        std::vector<Scalar> comps;
        for (const auto& e : faces[k])
          comps.push_back(parse_expr(e.get<std::string>(), ov.chart));
        ov.faces.emplace_back(ov.chart, target, std::move(comps));
      }
      overlaps.push_back(std::move(ov));
    }
  }
  sc.cover = std::make_shared<const Cover>(std::move(charts), std::move(overlaps));
  const Cover& cover = *sc.cover;

  auto load_per_chart_forms = [&](const json& arr) {
    std::vector<Form> out;
    for (size_t i = 0; i < arr.size(); ++i)
      out.push_back(form_from_json(arr[i], cover.chart(static_cast<int>(i)), sc.alg.get()));
    return out;
  };
  auto load_per_overlap_forms = [&](const json& obj) {
    std::map<std::vector<int>, Form> out;
    for (const auto& [key, val] : obj.items()) {
      std::vector<int> idx = parse_key(key);
      out.emplace(idx, form_from_json(val, cover.chart_of(idx), sc.alg.get()));
    }
    return out;
  };

  auto load_lie = [&](const json& lj) {
    LieData data;
    data.cover = sc.cover.get();
    data.alg = sc.alg;
    data.theta = load_per_chart_forms(lj.at("theta"));
    data.phi = load_per_overlap_forms(lj.at("phi"));
    for (const auto& [key, val] : lj.at("tau").items()) {
      std::vector<int> idx = parse_key(key);
      data.tau.emplace(idx, tau_from_json(val, cover.chart_of(idx), *sc.alg));
    }
    return data;
  };

  if (js.contains("lie_data")) sc.lie_data = load_lie(js.at("lie_data"));

  if (js.contains("courant_data")) {
    const json& cjd = js.at("courant_data");
    CourantData data;
    data.lie = load_lie(cjd);
    data.B = load_per_chart_forms(cjd.at("B"));
    for (const auto& [key, val] : cjd.at("beta").items()) {
      std::vector<int> idx = parse_key(key);
      const ChartPtr& chart = cover.chart_of(idx);
      std::vector<std::vector<Scalar>> beta;
      for (const auto& row : val) {
        std::vector<Scalar> r;
        for (const auto& e : row) r.push_back(parse_expr(e.get<std::string>(), chart));
        beta.push_back(std::move(r));
      }
      data.beta.emplace(idx, std::move(beta));
    }
    sc.courant_data = std::move(data);
  }

  if (js.contains("exact_data")) {
    const json& ej = js.at("exact_data");
    ExactData data;
    data.cover = sc.cover.get();
    data.B = load_per_chart_forms(ej.at("B"));
    data.curly = load_per_overlap_forms(ej.at("transition"));
    sc.exact_data = std::move(data);
  }

  if (js.contains("string_data")) {
    const json& sj = js.at("string_data");
    StringData data;
    data.cover = sc.cover.get();
    data.alg = sc.alg;
    data.theta = load_per_chart_forms(sj.at("theta"));
    data.B = load_per_chart_forms(sj.at("B"));
    for (const auto& [key, val] : sj.at("gbar").items()) {
      std::vector<int> idx = parse_key(key);
      data.gbar.emplace(idx, groupmap_from_json(val, cover.chart_of(idx)));
    }
    data.A = load_per_overlap_forms(sj.at("A"));
    if (sj.contains("omega2")) {
      data.omega2 = load_per_overlap_forms(sj.at("omega2"));
      data.f = circle_from_json(sj.value("f", json::object()), cover, 2);
      data.omega1 = formcochain_from_json(sj.value("omega1", json::object()), cover, 2, 1);
      data.Fc = circle_from_json(sj.value("F", json::object()), cover, 3);
    } else {
      // determined-tail generation from seeds
      StringData built = build_string_data(cover, sc.alg, data.theta, data.B, data.gbar, data.A,
                                           circle_from_json(sj.value("f", json::object()),
                                                            cover, 2),
                                           sc.tol);
      data = std::move(built);
    }
    sc.string_data = std::move(data);
  }

  if (js.contains("gerbe_data")) {
    const json& gj = js.at("gerbe_data");
    GerbeData data;
    data.cover = sc.cover.get();
    data.B = load_per_chart_forms(gj.at("B"));
    data.A = load_per_overlap_forms(gj.at("A"));
    data.a = circle_from_json(gj.value("a", json::object()), cover, 2);
    sc.gerbe_data = std::move(data);
  }

  if (js.contains("group_maps")) {
    for (const auto& gm : js.at("group_maps")) {
      int ci = gm.value("chart", 0);
      sc.group_maps.emplace_back(gm.value("name", "g"),
                                 groupmap_from_json(gm, cover.chart(ci)));
    }
  }

  if (js.contains("torsor_inputs"))
    sc.torsor_Bh = load_per_chart_forms(js.at("torsor_inputs").at("Bh"));
  if (js.contains("lift_inputs")) sc.lift_B = load_per_chart_forms(js.at("lift_inputs").at("B"));

  if (js.contains("d2_cocycle")) {
    const json& dj = js.at("d2_cocycle");
    D2Cocycle h = D2Cocycle::zero(cover);
    if (dj.contains("f")) h.f = circle_from_json(dj.at("f"), cover, 2);
    if (dj.contains("A")) h.A = formcochain_from_json(dj.at("A"), cover, 1, 1);
    if (dj.contains("B")) h.B = formcochain_from_json(dj.at("B"), cover, 0, 2);
    sc.d2 = std::move(h);
  }
  if (js.contains("coboundary")) {
    const json& cb = js.at("coboundary");
    sc.cob_phi = circle_from_json(cb.value("phi", json::object()), cover, 1);
    sc.cob_alpha = formcochain_from_json(cb.value("alpha", json::object()), cover, 0, 1);
  }

  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open scenario file '" + path + "'");
  json js;
  try {
    in >> js;
  } catch (const std::exception& e) {
    throw SchemaError("invalid JSON in '" + path + "': " + e.what());
  }
  return scenario_from_json(js);
}

uint64_t scenario_hash(const json& js) {
  json copy = js;
  copy.erase("generated_at");
  return fnv1a(copy.dump());
}

// ---------------------------------------------------------------------------
// Builtin generators
// ---------------------------------------------------------------------------

namespace {

json box_chart_json(const std::string& name, const std::vector<std::string>& coords,
                    const Box& box, int samples, uint64_t seed) {
  ChartPtr c = make_box_chart(name, coords, box, samples, seed);
  return chart_to_json(c);
}

json rot_block(const std::string& c, const std::string& s, int axis) {
  // SO(3) rotation about a coordinate axis with cos/sin entries given as text
  auto J = [&](int r, int k) { return 3 * r + k; };
  std::vector<std::string> m(9, "0");
  if (axis == 2) {
    m[J(0, 0)] = c;
    m[J(0, 1)] = "-(" + s + ")";
    m[J(1, 0)] = s;
    m[J(1, 1)] = c;
    m[J(2, 2)] = "1";
  } else if (axis == 0) {
    m[J(0, 0)] = "1";
    m[J(1, 1)] = c;
    m[J(1, 2)] = "-(" + s + ")";
    m[J(2, 1)] = s;
    m[J(2, 2)] = c;
  } else {
    m[J(1, 1)] = "1";
    m[J(0, 0)] = c;
    m[J(0, 2)] = s;
    m[J(2, 0)] = "-(" + s + ")";
    m[J(2, 2)] = c;
  }
  json rows = json::array();
  for (int r = 0; r < 3; ++r) {
    json row = json::array();
    for (int k = 0; k < 3; ++k) row.push_back(m[static_cast<size_t>(J(r, k))]);
    rows.push_back(row);
  }
  return json{{"tag", "SO"}, {"matrix", rows}};
}

GroupMap gm_from_json_text(const json& js, const ChartPtr& chart) {
  return groupmap_from_json(js, chart);
}

json form_json_scalar(int degree, std::map<std::string, std::string> coeffs) {
  json c = json::object();
  for (auto& [k, v] : coeffs) c[k] = v;
  return json{{"degree", degree}, {"space", "scalar"}, {"coeffs", c}};
}

json form_json_lie(int degree, std::map<std::string, std::vector<std::string>> coeffs) {
  json c = json::object();
  for (auto& [k, v] : coeffs) c[k] = v;
  return json{{"degree", degree}, {"space", "lie"}, {"coeffs", c}};
}

// --- flat_r3 ---------------------------------------------------------------

json generate_flat_r3() {
  json js;
  js["name"] = "flat_r3";
  js["seed"] = kDefaultSeed;
  js["algebra"] = "so3";
  js["notes"]["summary"] =
      "Single flat 3-chart with so(3): bracket axioms, Maurer-Cartan suite, "
      "automorphism checks.";

  Box box{{-1.5, -1.5, -1.5}, {1.5, 1.5, 1.5}};
  js["cover"]["charts"] = json::array({box_chart_json("r3", {"x0", "x1", "x2"}, box, 10, 0xF1A7)});
  js["cover"]["overlaps"] = json::array();

  // courant data: theta with curvature, B seed
  js["courant_data"]["theta"] =
      json::array({form_json_lie(1, {{"0", {"x1", "0", "0"}},
                                     {"1", {"0", "0", "x0*x2"}},
                                     {"2", {"0", "x0", "0"}}})});
  js["courant_data"]["phi"] = json::object();
  js["courant_data"]["tau"] = json::object();
  js["courant_data"]["B"] =
      json::array({form_json_scalar(2, {{"0,1", "x2"}, {"1,2", "x0*x1"}})});
  js["courant_data"]["beta"] = json::object();

  js["torsor_inputs"]["Bh"] =
      json::array({form_json_scalar(2, {{"0,1", "x0*x2"}, {"0,2", "x1"}})});
  js["lift_inputs"]["B"] = js["courant_data"]["B"];

  // Maurer-Cartan suite
  json maps = json::array();
  auto add_map = [&](const std::string& name, const json& gm) {
    json entry = gm;
    entry["name"] = name;
    entry["chart"] = 0;
    maps.push_back(entry);
  };
  add_map("rz_x0", rot_block("cos(x0)", "sin(x0)", 2));
  add_map("rx_x1", rot_block("cos(x1)", "sin(x1)", 0));
  add_map("rz_poly", rot_block("cos(x0*x1)", "sin(x0*x1)", 2));
  add_map("ry_mix", rot_block("cos(x1*x2)", "sin(x1*x2)", 1));
  add_map("rx_quad", rot_block("cos(x2^2)", "sin(x2^2)", 0));
  js["group_maps"] = maps;
  return js;
}

// --- sphere_so3 ------------------------------------------------------------

// Global embedding scalars in the north chart (z = u) and south chart (w = v):
//   X = 2u0/(1+r2), Y = 2u1/(1+r2), Z = (r2-1)/(1+r2), and in the south chart
//   X = 2v0/(1+s2), Y = 2v1/(1+s2), Z = (1-s2)/(1+s2), glued by inversion.
struct SphereText {
  static std::string r2(const std::string& a, const std::string& b) {
    return "(" + a + "^2 + " + b + "^2)";
  }
  static std::string gx(const std::string& a, const std::string& b) {
    return "2*" + a + "/(1 + " + r2(a, b) + ")";
  }
  static std::string gy(const std::string& a, const std::string& b) {
    return "2*" + b + "/(1 + " + r2(a, b) + ")";
  }
  static std::string gz_north(const std::string& a, const std::string& b) {
    return "(" + r2(a, b) + " - 1)/(1 + " + r2(a, b) + ")";
  }
  static std::string gz_south(const std::string& a, const std::string& b) {
    return "(1 - " + r2(a, b) + ")/(1 + " + r2(a, b) + ")";
  }
};

json sphere_gauge(int chart_index, const std::string& c0, const std::string& c1) {
  // chart 0: Rz(c0) Rx(c1); chart 1: Ry(c0*c1) Rz(c0)
  if (chart_index == 0) {
    json a = rot_block("cos(" + c0 + ")", "sin(" + c0 + ")", 2);
    json b = rot_block("cos(" + c1 + ")", "sin(" + c1 + ")", 0);
    return json{{"product", json::array({a, b})}};
  }
  json a = rot_block("cos(" + c0 + "*" + c1 + ")", "sin(" + c0 + "*" + c1 + ")", 1);
  json b = rot_block("cos(" + c0 + ")", "sin(" + c0 + ")", 2);
  return json{{"product", json::array({a, b})}};
}

json generate_sphere_so3();

// --- torus and abelian covers ----------------------------------------------

json generate_torus_gerbe();
json generate_r3_abelian();
json generate_four_dim_p1();

}  // namespace

std::vector<std::string> builtin_names() {
  return {"flat_r3", "sphere_so3", "torus_gerbe", "r3_minus_two_points_abelian", "four_dim_p1"};
}

json generate_builtin(const std::string& name) {
  if (name == "flat_r3") return generate_flat_r3();
  if (name == "sphere_so3") return generate_sphere_so3();
  if (name == "torus_gerbe") return generate_torus_gerbe();
  if (name == "r3_minus_two_points_abelian") return generate_r3_abelian();
  if (name == "four_dim_p1") return generate_four_dim_p1();
  throw SchemaError("unknown builtin scenario '" + name + "'");
}

}  // namespace ck
