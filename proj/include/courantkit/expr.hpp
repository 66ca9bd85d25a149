#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "courantkit/errors.hpp"

namespace ck {

// Exact rational constant. Kept normalized (den > 0, gcd = 1).
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d);
  static Rational integer(long long n) { return Rational(n, 1); }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_zero() const { return num == 0; }
  bool is_one() const { return num == 1 && den == 1; }

  // Checked arithmetic: nullopt on int64 overflow, callers then keep the op node unfolded.
  static std::optional<Rational> add(const Rational&, const Rational&);
  static std::optional<Rational> sub(const Rational&, const Rational&);
  static std::optional<Rational> mul(const Rational&, const Rational&);
  static std::optional<Rational> div(const Rational&, const Rational&);
  static std::optional<Rational> pow(const Rational&, int);
};

// Immutable expression tree over {rationals, coordinates, + - * /, integer powers, sin, cos, exp}.
// Subtrees are shared; all construction routes fold trivial identities and exact constants.
class Expr {
 public:
  enum class Kind : uint8_t { Num, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp };

  struct Node {
    Kind kind;
    Rational value;                 // Num
    int var = -1;                   // Var
    int exponent = 0;               // Pow
    std::shared_ptr<const Node> a;  // left / unary child
    std::shared_ptr<const Node> b;  // right child
  };

  Expr() : Expr(num(Rational{})) {}

  static Expr num(Rational r);
  static Expr integer(long long n) { return num(Rational::integer(n)); }
  static Expr var(int index);

  friend Expr operator+(const Expr&, const Expr&);
  friend Expr operator-(const Expr&, const Expr&);
  friend Expr operator*(const Expr&, const Expr&);
  friend Expr operator/(const Expr&, const Expr&);
  friend Expr operator-(const Expr&);
  Expr pow(int exponent) const;

  static Expr sin(const Expr&);
  static Expr cos(const Expr&);
  static Expr exp(const Expr&);

  bool is_zero() const { return n_->kind == Kind::Num && n_->value.is_zero(); }
  bool is_constant() const { return n_->kind == Kind::Num; }
  const Node* node() const { return n_.get(); }

  // IEEE-double evaluation. Throws DomainError when a divisor magnitude drops below
  // denom_floor or the result is non-finite.
  double eval(std::span<const double> point, double denom_floor = 1e-6) const;

  Expr diff(int var) const;
  Expr substitute(std::span<const Expr> replacements) const;

  std::string str(std::span<const std::string> names) const;

  size_t tree_size() const;

 private:
  explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  static Expr make(Node&& node);

  std::shared_ptr<const Node> n_;

  friend class ExprBuilder;
};

// Parses `text` against coordinate names per the grammar
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := base ("^" int)?
//   base   := number | ident | func "(" expr ")" | "(" expr ")" | "-" base
// with func in {sin, cos, exp}. Whitespace insignificant.
Expr parse_expr_text(const std::string& text, std::span<const std::string> coord_names);

}  // namespace ck
