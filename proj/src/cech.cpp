#include "courantkit/cech.hpp"

#include <algorithm>
#include <cmath>

namespace ck {

namespace {

std::string key_str(const std::vector<int>& idx) {
  std::string s;
  for (size_t i = 0; i < idx.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(idx[i]);
  }
  return s;
}

std::vector<int> drop(const std::vector<int>& idx, size_t k) {
  std::vector<int> out;
  out.reserve(idx.size() - 1);
  for (size_t i = 0; i < idx.size(); ++i)
    if (i != k) out.push_back(idx[i]);
  return out;
}

}  // namespace

Cover::Cover(std::vector<ChartPtr> charts, std::vector<Overlap> overlaps)
    : charts_(std::move(charts)) {
  for (auto& o : overlaps) {
    if (o.indices.size() < 2 || o.indices.size() > 4)
      throw SchemaError("overlap depth must be 2..4 indices");
    if (!std::is_sorted(o.indices.begin(), o.indices.end()) ||
        std::adjacent_find(o.indices.begin(), o.indices.end()) != o.indices.end())
      throw SchemaError("overlap indices must be strictly increasing");
    for (int i : o.indices)
      if (i < 0 || i >= chart_count()) throw SchemaError("overlap index out of range");
    if (o.faces.size() != o.indices.size())
      throw SchemaError("overlap " + key_str(o.indices) + " needs one face per index");
    overlaps_.emplace(o.indices, std::move(o));
  }
  // every listed overlap has all its faces: targets must exist and match
  for (const auto& [idx, o] : overlaps_) {
    for (size_t k = 0; k < idx.size(); ++k) {
      std::vector<int> sub = drop(idx, k);
      const ChartPtr& target = chart_of(sub);
      if (o.faces[k].target().get() != target.get())
        throw SchemaError("overlap " + key_str(idx) + " face " + std::to_string(k) +
                          " does not land on " + key_str(sub));
      if (o.faces[k].source().get() != o.chart.get())
        throw SchemaError("overlap " + key_str(idx) + " face source mismatch");
    }
  }
}

const Overlap* Cover::find(const std::vector<int>& indices) const {
  auto it = overlaps_.find(indices);
  return it == overlaps_.end() ? nullptr : &it->second;
}

const Overlap& Cover::require(const std::vector<int>& indices) const {
  const Overlap* o = find(indices);
  if (!o) throw MissingOverlap("U_{" + key_str(indices) + "}");
  return *o;
}

std::vector<const Overlap*> Cover::of_degree(int q) const {
  std::vector<const Overlap*> out;
  for (const auto& [idx, o] : overlaps_)
    if (static_cast<int>(idx.size()) == q + 1) out.push_back(&o);
  return out;
}

const ChartPtr& Cover::chart_of(const std::vector<int>& indices) const {
  if (indices.size() == 1) return charts_[static_cast<size_t>(indices[0])];
  return require(indices).chart;
}

std::vector<CheckResult> Cover::validate(const Tolerances& tol) const {
  std::vector<Check> checks;
  // d_a о d_b = d_{b-1} о d_a for a < b, evaluated at overlap samples
  for (const auto& [idx, o] : overlaps_) {
    if (idx.size() < 3) continue;
    for (size_t b = 1; b < idx.size(); ++b)
      for (size_t a = 0; a < b; ++a) {
        checks.push_back(
            {"cover.simplicial", "U_{" + key_str(idx) + "}:d" + std::to_string(a) + "d" +
                                     std::to_string(b),
             tol.identity, [this, &o, idx = idx, a, b](std::string& w) {
               // route 1: delete position b, then position a
               std::vector<int> sub_b = drop(idx, b);
               SmoothMap r1 = require(sub_b).faces[a].compose_after(o.faces[b]);
               // route 2: delete position a, then position b-1
               std::vector<int> sub_a = drop(idx, a);
               SmoothMap r2 = require(sub_a).faces[b - 1].compose_after(o.faces[a]);
               double worst = 0;
               for (const auto& p : o.chart->samples()) {
                 auto v1 = r1.eval(p);
                 auto v2 = r2.eval(p);
                 for (size_t i = 0; i < v1.size(); ++i)
                   worst = std::max(worst, std::abs(v1[i] - v2[i]));
               }
               w = "face composition mismatch " + std::to_string(worst);
               return worst;
             }});
      }
  }
  return run_checks(checks, ExecMode::Serial);
}

// ---------------------------------------------------------------------------
// Cochains
// ---------------------------------------------------------------------------

FormCochain FormCochain::zero(const Cover& cover, int cech_degree, int form_degree,
                              CoeffSpace space, int coeff_len) {
  FormCochain c;
  c.cover = &cover;
  c.cech_degree = cech_degree;
  c.form_degree = form_degree;
  c.space = space;
  c.coeff_len = coeff_len;
  return c;
}

void FormCochain::set(const std::vector<int>& indices, Form f) {
  if (static_cast<int>(indices.size()) != cech_degree + 1)
    throw SchemaError("cochain component index count mismatch");
  const ChartPtr& chart = cover->chart_of(indices);
  if (f.chart().get() != chart.get())
    throw SchemaError("cochain component not on its overlap chart");
  if (f.degree() != form_degree || f.coeff_len() != coeff_len)
    throw SchemaError("cochain component shape mismatch");
  comps.insert_or_assign(indices, std::move(f));
}

Form FormCochain::at(const std::vector<int>& indices) const {
  auto it = comps.find(indices);
  if (it != comps.end()) return it->second;
  return Form(cover->chart_of(indices), form_degree, space, coeff_len);
}

FormCochain operator+(const FormCochain& a, const FormCochain& b) {
  FormCochain out = a;
  for (const auto& [idx, f] : b.comps) out.set(idx, out.at(idx) + f);
  return out;
}

FormCochain operator-(const FormCochain& a, const FormCochain& b) {
  FormCochain out = a;
  for (const auto& [idx, f] : b.comps) out.set(idx, out.at(idx) - f);
  return out;
}

FormCochain FormCochain::d() const {
  FormCochain out = zero(*cover, cech_degree, form_degree + 1, space, coeff_len);
  for (const auto& [idx, f] : comps) out.set(idx, f.d());
  return out;
}

CircleCochain CircleCochain::zero(const Cover& cover, int cech_degree) {
  CircleCochain c;
  c.cover = &cover;
  c.cech_degree = cech_degree;
  return c;
}

void CircleCochain::set(const std::vector<int>& indices, Scalar lift) {
  if (static_cast<int>(indices.size()) != cech_degree + 1)
    throw SchemaError("circle cochain component index count mismatch");
  const ChartPtr& chart = cover->chart_of(indices);
  Scalar bound = lift.chart() ? lift : Scalar(chart, lift.expr());
  if (bound.chart().get() != chart.get())
    throw SchemaError("circle cochain component not on its overlap chart");
  lifts.insert_or_assign(indices, std::move(bound));
}

Scalar CircleCochain::at(const std::vector<int>& indices) const {
  auto it = lifts.find(indices);
  if (it != lifts.end()) return it->second;
  return Scalar(cover->chart_of(indices), Expr());
}

CircleCochain operator+(const CircleCochain& a, const CircleCochain& b) {
  CircleCochain out = a;
  for (const auto& [idx, s] : b.lifts) out.set(idx, out.at(idx) + s);
  return out;
}

CircleCochain operator-(const CircleCochain& a, const CircleCochain& b) {
  CircleCochain out = a;
  for (const auto& [idx, s] : b.lifts) out.set(idx, out.at(idx) - s);
  return out;
}

FormCochain cech_delta(const FormCochain& c) {
  FormCochain out =
      FormCochain::zero(*c.cover, c.cech_degree + 1, c.form_degree, c.space, c.coeff_len);
  for (const Overlap* o : c.cover->of_degree(c.cech_degree + 1)) {
    Form acc(o->chart, c.form_degree, c.space, c.coeff_len);
    for (size_t k = 0; k < o->indices.size(); ++k) {
      Form pulled = pullback(o->faces[k], c.at(drop(o->indices, k)));
      acc = (k % 2 == 0) ? acc + pulled : acc - pulled;
    }
    out.set(o->indices, std::move(acc));
  }
  return out;
}

CircleCochain cech_delta(const CircleCochain& c) {
  CircleCochain out = CircleCochain::zero(*c.cover, c.cech_degree + 1);
  for (const Overlap* o : c.cover->of_degree(c.cech_degree + 1)) {
    Scalar acc(o->chart, Expr());
    for (size_t k = 0; k < o->indices.size(); ++k) {
      Scalar pulled = o->faces[k].pull_scalar(c.at(drop(o->indices, k)));
      acc = (k % 2 == 0) ? acc + pulled : acc - pulled;
    }
    out.set(o->indices, std::move(acc));
  }
  return out;
}

FormCochain dlog(const CircleCochain& c) {
  FormCochain out = FormCochain::zero(*c.cover, c.cech_degree, 1);
  for (const auto& [idx, lift] : c.lifts) {
    const ChartPtr& chart = c.cover->chart_of(idx);
    Form one = Form::scalar_zero(chart, 1);
    for (int mu = 0; mu < chart->dim(); ++mu) one.add_term({mu}, {lift.partial(mu)});
    out.set(idx, std::move(one));
  }
  return out;
}

double circle_residual(const CircleCochain& c, const Tolerances& tol) {
  double worst = 0;
  for (const auto& [idx, lift] : c.lifts) {
    const ChartPtr& chart = c.cover->chart_of(idx);
    for (const auto& p : chart->eval_points(tol.extra_points, tol.seed)) {
      double v = lift.eval(p);
      worst = std::max(worst, std::abs(v - std::round(v)));
    }
  }
  return worst;
}

IdentityReport cochain_identity(const FormCochain& a, const FormCochain& b, double tol,
                                int extra_points, uint64_t seed) {
  IdentityReport worst;
  worst.pass = true;
  std::vector<std::vector<int>> keys;
  for (const auto& [idx, f] : a.comps) keys.push_back(idx);
  for (const auto& [idx, f] : b.comps)
    if (std::find(keys.begin(), keys.end(), idx) == keys.end()) keys.push_back(idx);
  for (const auto& idx : keys) {
    auto r = form_identity(a.at(idx), b.at(idx), tol, extra_points, seed);
    if (r.worst_residual >= worst.worst_residual) {
      bool keep = worst.pass;
      worst = r;
      worst.pass = keep && r.pass;
    } else if (!r.pass) {
      worst.pass = false;
    }
  }
  return worst;
}

double circle_cochain_residual(const CircleCochain& a, const CircleCochain& b,
                               const Tolerances& tol) {
  return circle_residual(a - b, tol);
}

// ---------------------------------------------------------------------------
// Deligne complex
// ---------------------------------------------------------------------------

DeligneCochain DeligneCochain::zero(const Cover& cover, int total_degree, int depth) {
  DeligneCochain x;
  x.cover = &cover;
  x.total_degree = total_degree;
  x.depth = depth;
  x.circle = CircleCochain::zero(cover, total_degree);
  for (int j = 0; j < std::min(depth, total_degree == 0 ? 0 : total_degree); ++j)
    x.forms.push_back(FormCochain::zero(cover, total_degree - 1 - j, j + 1));
  return x;
}

std::vector<FormCochain*> DeligneCochain::form_components() {
  std::vector<FormCochain*> out;
  for (auto& f : forms) out.push_back(&f);
  return out;
}

DeligneCochain deligne_D(const DeligneCochain& x) {
  DeligneCochain y = DeligneCochain::zero(*x.cover, x.total_degree + 1, x.depth);
  // circle level: y_circle = delta(x_circle)
  y.circle = cech_delta(x.circle);
  // first form level: y_0 at cech degree n, form degree 1:
  // delta(x_forms[0]) + (-1)^n dlog(x_circle)
  for (size_t j = 0; j < y.forms.size(); ++j) {
    int q = y.total_degree - 1 - static_cast<int>(j);  // cech degree of y.forms[j]
    FormCochain acc = FormCochain::zero(*x.cover, q, static_cast<int>(j) + 1);
    if (j < x.forms.size()) acc = acc + cech_delta(x.forms[j]);
    // (-1)^q d of the component one level up (form degree j)
    FormCochain dpart = j == 0 ? dlog(x.circle)
                               : (j - 1 < x.forms.size()
                                      ? x.forms[j - 1].d()
                                      : FormCochain::zero(*x.cover, q, static_cast<int>(j) + 1));
    acc = (q % 2 == 0) ? acc + dpart : acc - dpart;
    y.forms[j] = std::move(acc);
  }
  return y;
}

namespace {

void push_result(std::vector<CheckResult>& out, const std::string& tag, const std::string& loc,
                 double residual, double tol) {
  CheckResult r;
  r.tag = tag;
  r.location = loc;
  r.residual = residual;
  r.tol = tol;
  r.pass = residual <= tol;
  out.push_back(std::move(r));
}

}  // namespace

std::vector<CheckResult> deligne_cocycle_check(const DeligneCochain& x, const Tolerances& tol,
                                               ExecMode mode) {
  (void)mode;
  DeligneCochain y = deligne_D(x);
  std::vector<CheckResult> out;
  push_result(out, "deligne.circle-cocycle", "cech-" + std::to_string(y.total_degree),
              circle_residual(y.circle, tol), tol.mod1);
  for (size_t j = 0; j < y.forms.size(); ++j) {
    auto r = cochain_identity(y.forms[j],
                              FormCochain::zero(*x.cover, y.forms[j].cech_degree,
                                                y.forms[j].form_degree),
                              tol.identity, tol.extra_points, tol.seed);
    push_result(out, "deligne.staircase-" + std::to_string(j),
                "cech-" + std::to_string(y.forms[j].cech_degree), r.worst_residual, tol.identity);
  }
  return out;
}

std::vector<CheckResult> deligne_descent_check(const DeligneCochain& x, const DeligneCochain& y,
                                               const Tolerances& tol, ExecMode mode) {
  (void)mode;
  DeligneCochain dx = deligne_D(x);
  std::vector<CheckResult> out;
  push_result(out, "deligne.descent-circle", "cech-" + std::to_string(dx.total_degree),
              circle_cochain_residual(dx.circle, y.circle, tol), tol.mod1);
  for (size_t j = 0; j < dx.forms.size() && j < y.forms.size(); ++j) {
    auto r = cochain_identity(dx.forms[j], y.forms[j], tol.identity, tol.extra_points, tol.seed);
    push_result(out, "deligne.descent-" + std::to_string(j),
                "cech-" + std::to_string(dx.forms[j].cech_degree), r.worst_residual,
                tol.identity);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

Cover same_box_cover(const std::string& name, std::vector<std::string> coords, const Box& box,
                     int chart_count, int samples, uint64_t seed) {
  std::vector<ChartPtr> charts;
  for (int i = 0; i < chart_count; ++i)
    charts.push_back(
        make_box_chart(name + "_u" + std::to_string(i), coords, box, samples, seed + 7 * i));

  std::vector<Overlap> overlaps;
  // all index tuples of size 2..4
  std::vector<std::vector<int>> tuples;
  for (int i = 0; i < chart_count; ++i)
    for (int j = i + 1; j < chart_count; ++j) {
      tuples.push_back({i, j});
      for (int k = j + 1; k < chart_count; ++k) {
        tuples.push_back({i, j, k});
        for (int l = k + 1; l < chart_count; ++l) tuples.push_back({i, j, k, l});
      }
    }
  // build deeper overlaps after shallower ones so face targets exist
  std::sort(tuples.begin(), tuples.end(),
            [](const auto& a, const auto& b) { return a.size() < b.size(); });
  std::map<std::vector<int>, ChartPtr> overlap_charts;
  for (const auto& t : tuples) {
    ChartPtr chart = make_box_chart(name + "_o" + key_str(t), coords, box, samples,
                                    seed ^ fnv1a(key_str(t)));
    overlap_charts.emplace(t, chart);
    Overlap o;
    o.indices = t;
    o.chart = chart;
    for (size_t k = 0; k < t.size(); ++k) {
      std::vector<int> sub = drop(t, k);
      ChartPtr target = sub.size() == 1 ? charts[static_cast<size_t>(sub[0])]
                                        : overlap_charts.at(sub);
      std::vector<Scalar> comps;
      for (int mu = 0; mu < chart->dim(); ++mu) comps.push_back(Scalar::coordinate(chart, mu));
      o.faces.emplace_back(chart, target, std::move(comps));
    }
    overlaps.push_back(std::move(o));
  }
  return Cover(std::move(charts), std::move(overlaps));
}

FormCochain random_form_cochain(const Cover& cover, int cech_degree, int form_degree,
                                uint64_t seed) {
  SplitMix64 rng(seed ^ 0xf0c4a11u);
  FormCochain out = FormCochain::zero(cover, cech_degree, form_degree);
  auto fill = [&](const ChartPtr& chart, const std::vector<int>& idx) {
    Form f = Form::scalar_zero(chart, form_degree);
    // every increasing multi-index gets a small random polynomial
    std::vector<int> mi(static_cast<size_t>(form_degree));
    std::function<void(int, int)> rec = [&](int pos, int start) {
      if (pos == form_degree) {
        Scalar c = Scalar::constant(static_cast<long long>(rng.next() % 7) - 3);
        for (int v = 0; v < chart->dim(); ++v)
          if (rng.next() % 3 == 0) c = c * Scalar::coordinate(chart, v);
        f.add_term(mi, {c});
        return;
      }
      for (int v = start; v < chart->dim(); ++v) {
        mi[static_cast<size_t>(pos)] = v;
        rec(pos + 1, v + 1);
      }
    };
    if (form_degree == 0) {
      Scalar c = Scalar::constant(static_cast<long long>(rng.next() % 7) - 3);
      for (int v = 0; v < chart->dim(); ++v)
        if (rng.next() % 3 == 0) c = c * Scalar::coordinate(chart, v);
      f.add_term({}, {c});
    } else {
      rec(0, 0);
    }
    out.set(idx, std::move(f));
  };
  if (cech_degree == 0) {
    for (int i = 0; i < cover.chart_count(); ++i) fill(cover.chart(i), {i});
  } else {
    for (const Overlap* o : cover.of_degree(cech_degree)) fill(o->chart, o->indices);
  }
  return out;
}

CircleCochain random_circle_cochain(const Cover& cover, int cech_degree, uint64_t seed) {
  SplitMix64 rng(seed ^ 0xc19c1eu);
  CircleCochain out = CircleCochain::zero(cover, cech_degree);
  auto fill = [&](const ChartPtr& chart, const std::vector<int>& idx) {
    Scalar c = Scalar::constant(Rational(static_cast<long long>(rng.next() % 13) - 6, 4));
    for (int v = 0; v < chart->dim(); ++v)
      if (rng.next() % 2 == 0)
        c = c + Scalar::coordinate(chart, v) *
                    Scalar::constant(Rational(static_cast<long long>(rng.next() % 9) - 4, 8));
    out.set(idx, c);
  };
  if (cech_degree == 0) {
    for (int i = 0; i < cover.chart_count(); ++i) fill(cover.chart(i), {i});
  } else {
    for (const Overlap* o : cover.of_degree(cech_degree)) fill(o->chart, o->indices);
  }
  return out;
}

}  // namespace ck
