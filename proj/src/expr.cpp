#include "courantkit/expr.hpp"

#include <cctype>
#include <cmath>
#include <numeric>

namespace ck {

namespace {

bool fits64(__int128 v) {
  return v <= static_cast<__int128>(INT64_MAX) && v >= static_cast<__int128>(INT64_MIN);
}

std::optional<Rational> make_checked(__int128 num, __int128 den) {
  if (den == 0) return std::nullopt;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 a = num < 0 ? -num : num;
  __int128 g = 1;
  {
    __int128 x = a, y = den;
    while (y != 0) {
      __int128 t = x % y;
      x = y;
      y = t;
    }
    g = x == 0 ? 1 : x;
  }
  num /= g;
  den /= g;
  if (!fits64(num) || !fits64(den)) return std::nullopt;
  Rational r;
  r.num = static_cast<long long>(num);
  r.den = static_cast<long long>(den);
  return r;
}

}  // namespace

Rational::Rational(long long n, long long d) {
  auto r = make_checked(n, d);
  if (!r) throw DomainError("rational constant with zero denominator");
  num = r->num;
  den = r->den;
}

std::optional<Rational> Rational::add(const Rational& a, const Rational& b) {
  return make_checked(static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den,
                      static_cast<__int128>(a.den) * b.den);
}
std::optional<Rational> Rational::sub(const Rational& a, const Rational& b) {
  return make_checked(static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den,
                      static_cast<__int128>(a.den) * b.den);
}
std::optional<Rational> Rational::mul(const Rational& a, const Rational& b) {
  return make_checked(static_cast<__int128>(a.num) * b.num, static_cast<__int128>(a.den) * b.den);
}
std::optional<Rational> Rational::div(const Rational& a, const Rational& b) {
  if (b.num == 0) return std::nullopt;
  return make_checked(static_cast<__int128>(a.num) * b.den, static_cast<__int128>(a.den) * b.num);
}
std::optional<Rational> Rational::pow(const Rational& a, int e) {
  Rational acc = Rational::integer(1);
  Rational base = a;
  int n = e;
  if (n < 0) {
    auto inv = div(Rational::integer(1), a);
    if (!inv) return std::nullopt;
    base = *inv;
    n = -n;
  }
  while (n > 0) {
    if (n & 1) {
      auto m = mul(acc, base);
      if (!m) return std::nullopt;
      acc = *m;
    }
    auto s = mul(base, base);
    if (!s) return std::nullopt;
    base = *s;
    n >>= 1;
  }
  return acc;
}

Expr Expr::make(Node&& node) { return Expr(std::make_shared<const Node>(std::move(node))); }

Expr Expr::num(Rational r) {
  Node n;
  n.kind = Kind::Num;
  n.value = r;
  return make(std::move(n));
}

Expr Expr::var(int index) {
  Node n;
  n.kind = Kind::Var;
  n.var = index;
  return make(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_constant() && b.is_constant())
    if (auto r = Rational::add(a.n_->value, b.n_->value)) return Expr::num(*r);
  Expr::Node n;
  n.kind = Expr::Kind::Add;
  n.a = a.n_;
  n.b = b.n_;
  return Expr::make(std::move(n));
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  if (a.is_constant() && b.is_constant())
    if (auto r = Rational::sub(a.n_->value, b.n_->value)) return Expr::num(*r);
  Expr::Node n;
  n.kind = Expr::Kind::Sub;
  n.a = a.n_;
  n.b = b.n_;
  return Expr::make(std::move(n));
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr::num(Rational{});
  if (a.is_constant() && a.n_->value.is_one()) return b;
  if (b.is_constant() && b.n_->value.is_one()) return a;
  if (a.is_constant() && b.is_constant())
    if (auto r = Rational::mul(a.n_->value, b.n_->value)) return Expr::num(*r);
  if (a.is_constant() && a.n_->value.num == -1 && a.n_->value.den == 1) return -b;
  if (b.is_constant() && b.n_->value.num == -1 && b.n_->value.den == 1) return -a;
  Expr::Node n;
  n.kind = Expr::Kind::Mul;
  n.a = a.n_;
  n.b = b.n_;
  return Expr::make(std::move(n));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_zero() && !b.is_zero()) return Expr::num(Rational{});
  if (b.is_constant() && b.n_->value.is_one()) return a;
  if (a.is_constant() && b.is_constant())
    if (auto r = Rational::div(a.n_->value, b.n_->value)) return Expr::num(*r);
  Expr::Node n;
  n.kind = Expr::Kind::Div;
  n.a = a.n_;
  n.b = b.n_;
  return Expr::make(std::move(n));
}

Expr operator-(const Expr& a) {
  if (a.is_constant())
    if (auto r = Rational::sub(Rational{}, a.n_->value)) return Expr::num(*r);
  if (a.n_->kind == Expr::Kind::Neg) return Expr(a.n_->a);
  Expr::Node n;
  n.kind = Expr::Kind::Neg;
  n.a = a.n_;
  return Expr::make(std::move(n));
}

Expr Expr::pow(int e) const {
  if (e == 0) return integer(1);
  if (e == 1) return *this;
  if (is_constant())
    if (auto r = Rational::pow(n_->value, e)) return num(*r);
  Node n;
  n.kind = Kind::Pow;
  n.exponent = e;
  n.a = n_;
  return make(std::move(n));
}

Expr Expr::sin(const Expr& a) {
  if (a.is_zero()) return num(Rational{});
  Node n;
  n.kind = Kind::Sin;
  n.a = a.n_;
  return make(std::move(n));
}

Expr Expr::cos(const Expr& a) {
  if (a.is_zero()) return integer(1);
  Node n;
  n.kind = Kind::Cos;
  n.a = a.n_;
  return make(std::move(n));
}

Expr Expr::exp(const Expr& a) {
  if (a.is_zero()) return integer(1);
  Node n;
  n.kind = Kind::Exp;
  n.a = a.n_;
  return make(std::move(n));
}

namespace {

double eval_node(const Expr::Node* n, std::span<const double> p, double floor) {
  switch (n->kind) {
    case Expr::Kind::Num:
      return n->value.value();
    case Expr::Kind::Var:
      if (n->var < 0 || static_cast<size_t>(n->var) >= p.size())
        throw DomainError("coordinate index out of range for evaluation point");
      return p[static_cast<size_t>(n->var)];
    case Expr::Kind::Add:
      return eval_node(n->a.get(), p, floor) + eval_node(n->b.get(), p, floor);
    case Expr::Kind::Sub:
      return eval_node(n->a.get(), p, floor) - eval_node(n->b.get(), p, floor);
    case Expr::Kind::Mul:
      return eval_node(n->a.get(), p, floor) * eval_node(n->b.get(), p, floor);
    case Expr::Kind::Div: {
      double den = eval_node(n->b.get(), p, floor);
      if (std::abs(den) <= floor) throw DomainError("divisor below floor");
      return eval_node(n->a.get(), p, floor) / den;
    }
    case Expr::Kind::Pow: {
      double base = eval_node(n->a.get(), p, floor);
      if (n->exponent < 0 && std::abs(base) <= floor)
        throw DomainError("negative power of value below floor");
      return std::pow(base, n->exponent);
    }
    case Expr::Kind::Neg:
      return -eval_node(n->a.get(), p, floor);
    case Expr::Kind::Sin:
      return std::sin(eval_node(n->a.get(), p, floor));
    case Expr::Kind::Cos:
      return std::cos(eval_node(n->a.get(), p, floor));
    case Expr::Kind::Exp:
      return std::exp(eval_node(n->a.get(), p, floor));
  }
  throw DomainError("corrupt expression node");
}

}  // namespace

double Expr::eval(std::span<const double> point, double denom_floor) const {
  double v = eval_node(n_.get(), point, denom_floor);
  if (!std::isfinite(v)) throw DomainError("non-finite evaluation result");
  return v;
}

// ExprBuilder: internal constructor access for tree-walking algorithms.
class ExprBuilder {
 public:
  static Expr wrap(std::shared_ptr<const Expr::Node> n) { return Expr(std::move(n)); }
};

namespace {

using Memo = std::unordered_map<const Expr::Node*, Expr>;

Expr diff_rec(const std::shared_ptr<const Expr::Node>& sp, int var, Memo& memo) {
  const Expr::Node* n = sp.get();
  if (auto it = memo.find(n); it != memo.end()) return it->second;
  Expr result;
  switch (n->kind) {
    case Expr::Kind::Num:
      result = Expr::num(Rational{});
      break;
    case Expr::Kind::Var:
      result = n->var == var ? Expr::integer(1) : Expr::num(Rational{});
      break;
    case Expr::Kind::Add:
      result = diff_rec(n->a, var, memo) + diff_rec(n->b, var, memo);
      break;
    case Expr::Kind::Sub:
      result = diff_rec(n->a, var, memo) - diff_rec(n->b, var, memo);
      break;
    case Expr::Kind::Mul:
      result = diff_rec(n->a, var, memo) * ExprBuilder::wrap(n->b) +
               ExprBuilder::wrap(n->a) * diff_rec(n->b, var, memo);
      break;
    case Expr::Kind::Div: {
      Expr u = ExprBuilder::wrap(n->a), v = ExprBuilder::wrap(n->b);
      result = diff_rec(n->a, var, memo) / v - u * diff_rec(n->b, var, memo) / v.pow(2);
      break;
    }
    case Expr::Kind::Pow: {
      Expr base = ExprBuilder::wrap(n->a);
      result = Expr::integer(n->exponent) * base.pow(n->exponent - 1) * diff_rec(n->a, var, memo);
      break;
    }
    case Expr::Kind::Neg:
      result = -diff_rec(n->a, var, memo);
      break;
    case Expr::Kind::Sin:
      result = Expr::cos(ExprBuilder::wrap(n->a)) * diff_rec(n->a, var, memo);
      break;
    case Expr::Kind::Cos:
      result = -(Expr::sin(ExprBuilder::wrap(n->a)) * diff_rec(n->a, var, memo));
      break;
    case Expr::Kind::Exp:
      result = Expr::exp(ExprBuilder::wrap(n->a)) * diff_rec(n->a, var, memo);
      break;
  }
  memo.emplace(n, result);
  return result;
}

Expr subst_rec(const std::shared_ptr<const Expr::Node>& sp, std::span<const Expr> repl,
               Memo& memo) {
  const Expr::Node* n = sp.get();
  if (auto it = memo.find(n); it != memo.end()) return it->second;
  Expr result;
  switch (n->kind) {
    case Expr::Kind::Num:
      result = ExprBuilder::wrap(sp);
      break;
    case Expr::Kind::Var:
      if (n->var < 0 || static_cast<size_t>(n->var) >= repl.size())
        throw DomainError("substitution index out of range");
      result = repl[static_cast<size_t>(n->var)];
      break;
    case Expr::Kind::Add:
      result = subst_rec(n->a, repl, memo) + subst_rec(n->b, repl, memo);
      break;
    case Expr::Kind::Sub:
      result = subst_rec(n->a, repl, memo) - subst_rec(n->b, repl, memo);
      break;
    case Expr::Kind::Mul:
      result = subst_rec(n->a, repl, memo) * subst_rec(n->b, repl, memo);
      break;
    case Expr::Kind::Div:
      result = subst_rec(n->a, repl, memo) / subst_rec(n->b, repl, memo);
      break;
    case Expr::Kind::Pow:
      result = subst_rec(n->a, repl, memo).pow(n->exponent);
      break;
    case Expr::Kind::Neg:
      result = -subst_rec(n->a, repl, memo);
      break;
    case Expr::Kind::Sin:
      result = Expr::sin(subst_rec(n->a, repl, memo));
      break;
    case Expr::Kind::Cos:
      result = Expr::cos(subst_rec(n->a, repl, memo));
      break;
    case Expr::Kind::Exp:
      result = Expr::exp(subst_rec(n->a, repl, memo));
      break;
  }
  memo.emplace(n, result);
  return result;
}

size_t size_rec(const Expr::Node* n, std::unordered_map<const Expr::Node*, size_t>& seen) {
  if (seen.count(n)) return 0;  // shared subtree counted once
  seen.emplace(n, 1);
  size_t s = 1;
  if (n->a) s += size_rec(n->a.get(), seen);
  if (n->b) s += size_rec(n->b.get(), seen);
  return s;
}

int precedence(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return 1;
    case Expr::Kind::Neg:
      return 2;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      return 3;
    case Expr::Kind::Pow:
      return 4;
    default:
      return 5;
  }
}

void print_rec(const Expr::Node* n, std::span<const std::string> names, int parent_prec,
               std::string& out) {
  int prec = precedence(n->kind);
  bool wrap = prec < parent_prec;
  if (wrap) out += "(";
  switch (n->kind) {
    case Expr::Kind::Num:
      if (n->value.num < 0) {
        out += "(";
        out += std::to_string(n->value.num);
        if (n->value.den != 1) out += "/" + std::to_string(n->value.den);
        out += ")";
      } else {
        out += std::to_string(n->value.num);
        if (n->value.den != 1) out += "/" + std::to_string(n->value.den);
      }
      break;
    case Expr::Kind::Var:
      out += names[static_cast<size_t>(n->var)];
      break;
    case Expr::Kind::Add:
      print_rec(n->a.get(), names, prec, out);
      out += " + ";
      print_rec(n->b.get(), names, prec + 1, out);
      break;
    case Expr::Kind::Sub:
      print_rec(n->a.get(), names, prec, out);
      out += " - ";
      print_rec(n->b.get(), names, prec + 1, out);
      break;
    case Expr::Kind::Mul:
      print_rec(n->a.get(), names, prec, out);
      out += "*";
      print_rec(n->b.get(), names, prec + 1, out);
      break;
    case Expr::Kind::Div:
      print_rec(n->a.get(), names, prec, out);
      out += "/";
      print_rec(n->b.get(), names, prec + 1, out);
      break;
    case Expr::Kind::Pow:
      print_rec(n->a.get(), names, prec + 1, out);
      out += "^" + std::to_string(n->exponent);
      break;
    case Expr::Kind::Neg:
      out += "-";
      print_rec(n->a.get(), names, prec + 1, out);
      break;
    case Expr::Kind::Sin:
      out += "sin(";
      print_rec(n->a.get(), names, 0, out);
      out += ")";
      break;
    case Expr::Kind::Cos:
      out += "cos(";
      print_rec(n->a.get(), names, 0, out);
      out += ")";
      break;
    case Expr::Kind::Exp:
      out += "exp(";
      print_rec(n->a.get(), names, 0, out);
      out += ")";
      break;
  }
  if (wrap) out += ")";
}

}  // namespace

Expr Expr::diff(int var) const {
  Memo memo;
  return diff_rec(n_, var, memo);
}

Expr Expr::substitute(std::span<const Expr> replacements) const {
  Memo memo;
  return subst_rec(n_, replacements, memo);
}

std::string Expr::str(std::span<const std::string> names) const {
  std::string out;
  print_rec(n_.get(), names, 0, out);
  return out;
}

size_t Expr::tree_size() const {
  std::unordered_map<const Node*, size_t> seen;
  return size_rec(n_.get(), seen);
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Parser {
  const std::string& text;
  std::span<const std::string> coords;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool consume(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& expected) {
    std::string got = pos < text.size() ? std::string(1, text[pos]) : "end of input";
    throw SyntaxError(pos, expected, got);
  }

  Expr parse_expr() {
    Expr e = parse_term();
    while (true) {
      if (consume('+'))
        e = e + parse_term();
      else if (consume('-'))
        e = e - parse_term();
      else
        return e;
    }
  }

  Expr parse_term() {
    Expr e = parse_factor();
    while (true) {
      if (consume('*'))
        e = e * parse_factor();
      else if (consume('/'))
        e = e / parse_factor();
      else
        return e;
    }
  }

  Expr parse_factor() {
    Expr e = parse_base();
    if (consume('^')) {
      skip_ws();
      bool neg = consume('-');
      skip_ws();
      if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
        fail("integer exponent");
      long long v = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        v = v * 10 + (text[pos] - '0');
        if (v > 64) fail("exponent magnitude <= 64");
        ++pos;
      }
      e = e.pow(static_cast<int>(neg ? -v : v));
    }
    return e;
  }

  Expr parse_base() {
    skip_ws();
    if (pos >= text.size()) fail("number, identifier, function or '('");
    char c = text[pos];
    if (c == '(') {
      ++pos;
      Expr e = parse_expr();
      if (!consume(')')) fail("')'");
      return e;
    }
    if (c == '-') {
      ++pos;
      return -parse_base();
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    fail("number, identifier, function or '('");
  }

  Expr parse_number() {
    size_t start = pos;
    long long ip = 0;
    bool any = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      if (ip > (INT64_MAX - 9) / 10) fail("literal within 64-bit range");
      ip = ip * 10 + (text[pos] - '0');
      ++pos;
      any = true;
    }
    long long frac_num = 0, frac_den = 1;
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        if (frac_den > INT64_MAX / 10 || frac_num > (INT64_MAX - 9) / 10)
          fail("literal within 64-bit range");
        frac_num = frac_num * 10 + (text[pos] - '0');
        frac_den *= 10;
        ++pos;
        any = true;
      }
    }
    if (!any) {
      pos = start;
      fail("digits");
    }
    auto whole = Rational::integer(ip);
    auto frac = Rational(frac_num, frac_den);
    auto sum = Rational::add(whole, frac);
    if (!sum) fail("literal within 64-bit range");
    return Expr::num(*sum);
  }

  Expr parse_ident() {
    size_t start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                 text[pos] == '_'))
      ++pos;
    std::string name = text.substr(start, pos - start);
    if (name == "sin" || name == "cos" || name == "exp") {
      if (!consume('(')) fail("'(' after function name");
      Expr arg = parse_expr();
      if (!consume(')')) fail("')'");
      if (name == "sin") return Expr::sin(arg);
      if (name == "cos") return Expr::cos(arg);
      return Expr::exp(arg);
    }
    for (size_t i = 0; i < coords.size(); ++i)
      if (coords[i] == name) return Expr::var(static_cast<int>(i));
    throw UnknownIdentifier(name, start);
  }
};

}  // namespace

Expr parse_expr_text(const std::string& text, std::span<const std::string> coord_names) {
  Parser p{text, coord_names};
  Expr e = p.parse_expr();
  if (!p.eof()) p.fail("end of input");
  return e;
}

}  // namespace ck
