#pragma once

#include "courantkit/liealg.hpp"

namespace ck {

// One overlap of a combinatorial cover: the chart modelling U_{i0...iq} and a
// face map per index deletion, faces[k] landing in the overlap (or chart) with
// index k removed.
struct Overlap {
  std::vector<int> indices;  // strictly increasing
  ChartPtr chart;
  std::vector<SmoothMap> faces;
};

// Charts plus overlap charts with face maps, up to four indices deep.
class Cover {
 public:
  Cover(std::vector<ChartPtr> charts, std::vector<Overlap> overlaps);

  int chart_count() const { return static_cast<int>(charts_.size()); }
  const ChartPtr& chart(int i) const { return charts_[static_cast<size_t>(i)]; }
  const std::vector<ChartPtr>& charts() const { return charts_; }

  const Overlap* find(const std::vector<int>& indices) const;
  const Overlap& require(const std::vector<int>& indices) const;
  std::vector<const Overlap*> of_degree(int q) const;  // q+1 indices
  const std::map<std::vector<int>, Overlap>& overlaps() const { return overlaps_; }

  // The chart modelling the (possibly trivial) "overlap" for q = 0, i.e. U_i.
  const ChartPtr& chart_of(const std::vector<int>& indices) const;

  // Simplicial identities among face maps, checked at samples.
  std::vector<CheckResult> validate(const Tolerances& tol = Tolerances{}) const;

 private:
  std::vector<ChartPtr> charts_;
  std::map<std::vector<int>, Overlap> overlaps_;
};

// Degree-q cochain of forms: one component per q+1 distinct cover indices,
// missing components read as zero.
struct FormCochain {
  const Cover* cover = nullptr;
  int cech_degree = 0;
  int form_degree = 0;
  CoeffSpace space = CoeffSpace::Scalar;
  int coeff_len = 1;
  std::map<std::vector<int>, Form> comps;

  static FormCochain zero(const Cover& cover, int cech_degree, int form_degree,
                          CoeffSpace space = CoeffSpace::Scalar, int coeff_len = 1);
  void set(const std::vector<int>& indices, Form f);
  Form at(const std::vector<int>& indices) const;  // zero form when absent

  friend FormCochain operator+(const FormCochain&, const FormCochain&);
  friend FormCochain operator-(const FormCochain&, const FormCochain&);
  FormCochain d() const;  // componentwise exterior derivative
};

// Circle-valued cochain stored through real lifts; values agree mod 1.
struct CircleCochain {
  const Cover* cover = nullptr;
  int cech_degree = 0;
  std::map<std::vector<int>, Scalar> lifts;

  static CircleCochain zero(const Cover& cover, int cech_degree);
  void set(const std::vector<int>& indices, Scalar lift);
  Scalar at(const std::vector<int>& indices) const;

  friend CircleCochain operator+(const CircleCochain&, const CircleCochain&);
  friend CircleCochain operator-(const CircleCochain&, const CircleCochain&);
};

// Alternating face-map pullback sums.
FormCochain cech_delta(const FormCochain& c);
CircleCochain cech_delta(const CircleCochain& c);

// Componentwise d of the real lift; independent of the lift choice on
// connected overlaps.
FormCochain dlog(const CircleCochain& c);

// Distance of each lift value from the nearest integer, worst over samples.
double circle_residual(const CircleCochain& c, const Tolerances& tol = Tolerances{});

// Sampled identity of cochains (componentwise, mod 1 for circle parts).
IdentityReport cochain_identity(const FormCochain& a, const FormCochain& b, double tol = 1e-9,
                                int extra_points = 32, uint64_t seed = kDefaultSeed);
double circle_cochain_residual(const CircleCochain& a, const CircleCochain& b,
                               const Tolerances& tol = Tolerances{});

// Deligne cochain of total degree n and depth m: a circle component at Cech
// degree n and form components at (n-1, 1), ..., capped at form degree m.
struct DeligneCochain {
  const Cover* cover = nullptr;
  int total_degree = 0;  // n
  int depth = 0;         // m: highest form degree carried
  CircleCochain circle;
  std::vector<FormCochain> forms;  // forms[j]: cech degree n-1-j, form degree j+1

  static DeligneCochain zero(const Cover& cover, int total_degree, int depth);
  std::vector<FormCochain*> form_components();
};

// Total differential: (circle, w1, ..., wm) -> components
// y_q = cech_delta(x_{q-1}) + (-1)^q d(x_q), with dlog on the circle level.
DeligneCochain deligne_D(const DeligneCochain& x);

// Residuals of the cocycle conditions D(x) = 0.
std::vector<CheckResult> deligne_cocycle_check(const DeligneCochain& x,
                                               const Tolerances& tol = Tolerances{},
                                               ExecMode mode = default_mode());

// Residuals of the staircase D(x) = y on the overlapping component range.
std::vector<CheckResult> deligne_descent_check(const DeligneCochain& x, const DeligneCochain& y,
                                               const Tolerances& tol = Tolerances{},
                                               ExecMode mode = default_mode());

// Cover with n identical box charts and full overlap lattice to depth 4;
// exercises deep Cech combinatorics with identity face maps.
Cover same_box_cover(const std::string& name, std::vector<std::string> coords, const Box& box,
                     int chart_count, int samples = 8, uint64_t seed = kDefaultSeed);

// Deterministic random scalar form cochain for property tests.
FormCochain random_form_cochain(const Cover& cover, int cech_degree, int form_degree,
                                uint64_t seed);
CircleCochain random_circle_cochain(const Cover& cover, int cech_degree, uint64_t seed);

}  // namespace ck
