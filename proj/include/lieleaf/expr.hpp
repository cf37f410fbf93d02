#pragma once

// Scalar expressions over indexed coordinates: parsing, printing, evaluation
// and exact symbolic differentiation.
//
// Grammar accepted by parse():
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | base ('^' ['-'] integer)?
//   base   := number | ident | '(' expr ')' | func '(' expr ')'
//   func   := sin | cos | exp | log | sqrt | neg

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lieleaf {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifierError : public std::runtime_error {
 public:
  explicit UnknownIdentifierError(std::string symbol)
      : std::runtime_error("unknown identifier \"" + symbol + "\""),
        symbol_(std::move(symbol)) {}
  const std::string& symbol() const { return symbol_; }

 private:
  std::string symbol_;
};

class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& what, std::string subexpression)
      : std::runtime_error(what + " in " + subexpression),
        subexpression_(std::move(subexpression)) {}
  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string subexpression_;
};

enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Log, Sqrt };

/// Immutable expression tree. Copies share nodes; safe to evaluate
/// concurrently.
class Expr {
 public:
  struct Node {
    Op op = Op::Const;
    double value = 0.0;  // Const
    int index = 0;       // Var: coordinate index; Pow: exponent
    int arity = 0;       // 1 + largest variable index referenced
    std::shared_ptr<const Node> lhs, rhs;
  };

  Expr() : Expr(0.0) {}
  Expr(double c) : node_(make(Op::Const, c, 0, nullptr, nullptr)) {}  // NOLINT

  static Expr constant(double c) { return Expr(c); }
  static Expr variable(int index) {
    if (index < 0) throw std::invalid_argument("negative variable index");
    return Expr(make(Op::Var, 0.0, index, nullptr, nullptr));
  }

  // Raw constructors: no folding. The parser uses these so that parsed
  // trees mirror the source text.
  static Expr raw(Op op, const Expr& a, const Expr& b) {
    return Expr(make(op, 0.0, 0, a.node_, b.node_));
  }
  static Expr raw_unary(Op op, const Expr& a) {
    return Expr(make(op, 0.0, 0, a.node_, nullptr));
  }
  static Expr raw_pow(const Expr& a, int k) {
    return Expr(make(Op::Pow, 0.0, k, a.node_, nullptr));
  }

  Op op() const { return node_->op; }
  double value() const { return node_->value; }
  int index() const { return node_->index; }
  int exponent() const { return node_->index; }
  int arity() const { return node_->arity; }
  Expr lhs() const { return Expr(node_->lhs); }
  Expr rhs() const { return Expr(node_->rhs); }

  bool is_const() const { return node_->op == Op::Const; }
  bool is_const(double c) const { return is_const() && node_->value == c; }
  bool is_zero() const { return is_const(0.0); }

  friend bool operator==(const Expr& a, const Expr& b) { return equal(a.node_.get(), b.node_.get()); }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static std::shared_ptr<const Node> make(Op op, double value, int index,
                                          std::shared_ptr<const Node> lhs,
                                          std::shared_ptr<const Node> rhs) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->value = value;
    n->index = index;
    n->arity = op == Op::Var ? index + 1 : 0;
    if (lhs) n->arity = std::max(n->arity, lhs->arity);
    if (rhs) n->arity = std::max(n->arity, rhs->arity);
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  static bool equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->op != b->op) return false;
    switch (a->op) {
      case Op::Const: return a->value == b->value;
      case Op::Var: return a->index == b->index;
      case Op::Pow: return a->index == b->index && equal(a->lhs.get(), b->lhs.get());
      default: return equal(a->lhs.get(), b->lhs.get()) && equal(a->rhs.get(), b->rhs.get());
    }
  }

  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Folding constructors. Only constants are folded; no other simplification.

inline bool is_unary(Op op) {
  return op == Op::Neg || op == Op::Sin || op == Op::Cos || op == Op::Exp || op == Op::Log ||
         op == Op::Sqrt;
}

inline Expr neg(const Expr& a) {
  if (a.is_const()) return Expr(-a.value());
  if (a.op() == Op::Neg) return a.lhs();
  return Expr::raw_unary(Op::Neg, a);
}

inline Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_const() && b.is_const()) return Expr(a.value() + b.value());
  return Expr::raw(Op::Add, a, b);
}

inline Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return neg(b);
  if (a.is_const() && b.is_const()) return Expr(a.value() - b.value());
  return Expr::raw(Op::Sub, a, b);
}

inline Expr operator-(const Expr& a) { return neg(a); }

inline Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr(0.0);
  if (a.is_const(1.0)) return b;
  if (b.is_const(1.0)) return a;
  if (a.is_const(-1.0)) return neg(b);
  if (b.is_const(-1.0)) return neg(a);
  if (a.is_const() && b.is_const()) return Expr(a.value() * b.value());
  return Expr::raw(Op::Mul, a, b);
}

inline Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_zero()) return Expr(0.0);
  if (b.is_const(1.0)) return a;
  if (a.is_const() && b.is_const() && b.value() != 0.0) return Expr(a.value() / b.value());
  return Expr::raw(Op::Div, a, b);
}

inline Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
inline Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
inline Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

inline Expr pow(const Expr& a, int k) {
  if (k == 0) return Expr(1.0);
  if (k == 1) return a;
  if (a.is_const() && (a.value() != 0.0 || k > 0)) return Expr(std::pow(a.value(), k));
  return Expr::raw_pow(a, k);
}

namespace detail {
inline Expr unary(Op op, const Expr& a, double (*fn)(double), bool defined) {
  if (a.is_const() && defined) return Expr(fn(a.value()));
  return Expr::raw_unary(op, a);
}
}  // namespace detail

inline Expr sin(const Expr& a) { return detail::unary(Op::Sin, a, [](double v) { return std::sin(v); }, true); }
inline Expr cos(const Expr& a) { return detail::unary(Op::Cos, a, [](double v) { return std::cos(v); }, true); }
inline Expr exp(const Expr& a) { return detail::unary(Op::Exp, a, [](double v) { return std::exp(v); }, true); }
inline Expr log(const Expr& a) {
  return detail::unary(Op::Log, a, [](double v) { return std::log(v); }, a.is_const() && a.value() > 0.0);
}
inline Expr sqrt(const Expr& a) {
  return detail::unary(Op::Sqrt, a, [](double v) { return std::sqrt(v); }, a.is_const() && a.value() >= 0.0);
}

// ---------------------------------------------------------------------------
// Printing

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string print(const Expr& e, std::span<const std::string> names) {
  auto name_of = [&](int i) -> std::string {
    if (i < static_cast<int>(names.size())) return names[i];
    return "$" + std::to_string(i);
  };
  switch (e.op()) {
    case Op::Const: {
      double v = e.value();
      if (std::signbit(v)) return "neg(" + format_number(-v) + ")";
      return format_number(v);
    }
    case Op::Var: return name_of(e.index());
    case Op::Add: return "(" + print(e.lhs(), names) + " + " + print(e.rhs(), names) + ")";
    case Op::Sub: return "(" + print(e.lhs(), names) + " - " + print(e.rhs(), names) + ")";
    case Op::Mul: return "(" + print(e.lhs(), names) + " * " + print(e.rhs(), names) + ")";
    case Op::Div: return "(" + print(e.lhs(), names) + " / " + print(e.rhs(), names) + ")";
    case Op::Pow: {
      Expr b = e.lhs();
      std::string base = print(b, names);
      if (b.op() == Op::Pow || (b.is_const() && std::signbit(b.value()))) base = "(" + base + ")";
      return base + "^" + std::to_string(e.exponent());
    }
    case Op::Neg: return "neg(" + print(e.lhs(), names) + ")";
    case Op::Sin: return "sin(" + print(e.lhs(), names) + ")";
    case Op::Cos: return "cos(" + print(e.lhs(), names) + ")";
    case Op::Exp: return "exp(" + print(e.lhs(), names) + ")";
    case Op::Log: return "log(" + print(e.lhs(), names) + ")";
    case Op::Sqrt: return "sqrt(" + print(e.lhs(), names) + ")";
  }
  return {};
}

inline std::string print(const Expr& e, const std::vector<std::string>& names) {
  return print(e, std::span<const std::string>(names));
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> coords) : text_(text), coords_(coords) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+')) e = Expr::raw(Op::Add, e, term());
      else if (accept('-')) e = Expr::raw(Op::Sub, e, term());
      else return e;
    }
  }

  Expr term() {
    Expr e = factor();
    for (;;) {
      if (accept('*')) e = Expr::raw(Op::Mul, e, factor());
      else if (accept('/')) e = Expr::raw(Op::Div, e, factor());
      else return e;
    }
  }

  Expr factor() {
    if (accept('-')) return Expr::raw_unary(Op::Neg, factor());
    Expr b = base();
    if (accept('^')) {
      skip_ws();
      bool negative = accept('-');
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) throw ParseError("expected integer exponent", pos_);
      long k = std::strtol(std::string(text_.substr(start, pos_ - start)).c_str(), nullptr, 10);
      if (k > 1000000) throw ParseError("exponent too large", start);
      return Expr::raw_pow(b, static_cast<int>(negative ? -k : k));
    }
    return b;
  }

  Expr base() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string ident(text_.substr(start, pos_ - start));
      std::size_t after = pos_;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '(') {
        Op op;
        if (ident == "sin") op = Op::Sin;
        else if (ident == "cos") op = Op::Cos;
        else if (ident == "exp") op = Op::Exp;
        else if (ident == "log") op = Op::Log;
        else if (ident == "sqrt") op = Op::Sqrt;
        else if (ident == "neg") op = Op::Neg;
        else throw ParseError("unknown function \"" + ident + "\"", start);
        ++pos_;
        Expr arg = expr();
        expect(')');
        return Expr::raw_unary(op, arg);
      }
      pos_ = after;
      for (std::size_t i = 0; i < coords_.size(); ++i)
        if (coords_[i] == ident) return Expr::variable(static_cast<int>(i));
      throw UnknownIdentifierError(ident);
    }
    if (accept('(')) {
      Expr e = expr();
      expect(')');
      return e;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  Expr number() {
    std::string tail(text_.substr(pos_));
    char* end = nullptr;
    double v = std::strtod(tail.c_str(), &end);
    if (end == tail.c_str()) throw ParseError("malformed number", pos_);
    pos_ += static_cast<std::size_t>(end - tail.c_str());
    return Expr(v);
  }

  std::string_view text_;
  std::span<const std::string> coords_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse(std::string_view text, std::span<const std::string> coords) {
  return detail::Parser(text, coords).parse();
}

inline Expr parse(std::string_view text, const std::vector<std::string>& coords) {
  return parse(text, std::span<const std::string>(coords));
}

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

inline double eval_node(const Expr& e, std::span<const double> p) {
  auto fail = [&](const char* what) -> double { throw DomainError(what, print(e, std::span<const std::string>{})); };
  switch (e.op()) {
    case Op::Const: return e.value();
    case Op::Var: return p[static_cast<std::size_t>(e.index())];
    case Op::Add: return eval_node(e.lhs(), p) + eval_node(e.rhs(), p);
    case Op::Sub: return eval_node(e.lhs(), p) - eval_node(e.rhs(), p);
    case Op::Mul: return eval_node(e.lhs(), p) * eval_node(e.rhs(), p);
    case Op::Div: {
      double num = eval_node(e.lhs(), p);
      double den = eval_node(e.rhs(), p);
      if (den == 0.0) return fail("division by zero");
      return num / den;
    }
    case Op::Pow: {
      double b = eval_node(e.lhs(), p);
      if (b == 0.0 && e.exponent() < 0) return fail("zero raised to a negative power");
      return std::pow(b, e.exponent());
    }
    case Op::Neg: return -eval_node(e.lhs(), p);
    case Op::Sin: return std::sin(eval_node(e.lhs(), p));
    case Op::Cos: return std::cos(eval_node(e.lhs(), p));
    case Op::Exp: return std::exp(eval_node(e.lhs(), p));
    case Op::Log: {
      double a = eval_node(e.lhs(), p);
      if (!(a > 0.0)) return fail("log of nonpositive value");
      return std::log(a);
    }
    case Op::Sqrt: {
      double a = eval_node(e.lhs(), p);
      if (a < 0.0) return fail("sqrt of negative value");
      return std::sqrt(a);
    }
  }
  return 0.0;
}

}  // namespace detail

/// Evaluates `e` at `point`. The point must cover every referenced
/// coordinate; domain violations throw DomainError naming the subexpression.
inline double eval(const Expr& e, std::span<const double> point) {
  if (static_cast<int>(point.size()) < e.arity())
    throw std::invalid_argument("point has " + std::to_string(point.size()) + " coordinates, expression needs " +
                                std::to_string(e.arity()));
  return detail::eval_node(e, point);
}

inline double eval(const Expr& e, const std::vector<double>& point) {
  return eval(e, std::span<const double>(point));
}

// ---------------------------------------------------------------------------
// Differentiation

inline Expr diff(const Expr& e, int var) {
  if (var >= e.arity()) return Expr(0.0);
  switch (e.op()) {
    case Op::Const: return Expr(0.0);
    case Op::Var: return Expr(e.index() == var ? 1.0 : 0.0);
    case Op::Add: return diff(e.lhs(), var) + diff(e.rhs(), var);
    case Op::Sub: return diff(e.lhs(), var) - diff(e.rhs(), var);
    case Op::Mul: return diff(e.lhs(), var) * e.rhs() + e.lhs() * diff(e.rhs(), var);
    case Op::Div: {
      Expr a = e.lhs(), b = e.rhs();
      Expr da = diff(a, var), db = diff(b, var);
      if (db.is_zero()) return da / b;
      return (da * b - a * db) / pow(b, 2);
    }
    case Op::Pow: {
      int k = e.exponent();
      return Expr(static_cast<double>(k)) * pow(e.lhs(), k - 1) * diff(e.lhs(), var);
    }
    case Op::Neg: return neg(diff(e.lhs(), var));
    case Op::Sin: return cos(e.lhs()) * diff(e.lhs(), var);
    case Op::Cos: return neg(sin(e.lhs())) * diff(e.lhs(), var);
    case Op::Exp: return exp(e.lhs()) * diff(e.lhs(), var);
    case Op::Log: return diff(e.lhs(), var) / e.lhs();
    case Op::Sqrt: return diff(e.lhs(), var) / (Expr(2.0) * sqrt(e.lhs()));
  }
  return Expr(0.0);
}

inline Expr diff(const Expr& e, std::string_view coord, std::span<const std::string> coords) {
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (coords[i] == coord) return diff(e, static_cast<int>(i));
  throw UnknownIdentifierError(std::string(coord));
}

/// Replaces variable i by `replacement[i]` for every i < replacement.size().
inline Expr substitute(const Expr& e, std::span<const Expr> replacement) {
  switch (e.op()) {
    case Op::Const: return e;
    case Op::Var:
      return e.index() < static_cast<int>(replacement.size()) ? replacement[e.index()] : e;
    case Op::Add: return substitute(e.lhs(), replacement) + substitute(e.rhs(), replacement);
    case Op::Sub: return substitute(e.lhs(), replacement) - substitute(e.rhs(), replacement);
    case Op::Mul: return substitute(e.lhs(), replacement) * substitute(e.rhs(), replacement);
    case Op::Div: return substitute(e.lhs(), replacement) / substitute(e.rhs(), replacement);
    case Op::Pow: return pow(substitute(e.lhs(), replacement), e.exponent());
    case Op::Neg: return neg(substitute(e.lhs(), replacement));
    case Op::Sin: return sin(substitute(e.lhs(), replacement));
    case Op::Cos: return cos(substitute(e.lhs(), replacement));
    case Op::Exp: return exp(substitute(e.lhs(), replacement));
    case Op::Log: return log(substitute(e.lhs(), replacement));
    case Op::Sqrt: return sqrt(substitute(e.lhs(), replacement));
  }
  return e;
}

using ScalarField = Expr;

}  // namespace lieleaf
