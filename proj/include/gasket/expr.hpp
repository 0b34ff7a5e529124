#pragma once

#include "gasket/geometry.hpp"
#include "gasket/polynomial.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gasket::expr {

enum class Op { Const, Var, Add, Sub, Mul, Div, Pow };

struct Node;
using Expr = std::shared_ptr<const Node>;

/// Test-function AST. Pow carries an integer exponent.
struct Node {
  Op op = Op::Const;
  double value = 0.0;  // Const
  int var = 0;         // Var: 0 = x, 1 = y, 2 = z
  int exponent = 0;    // Pow
  Expr lhs, rhs;
};

inline Expr constant(double v) { return std::make_shared<Node>(Node{Op::Const, v, 0, 0, nullptr, nullptr}); }
inline Expr variable(int i) { return std::make_shared<Node>(Node{Op::Var, 0.0, i, 0, nullptr, nullptr}); }
inline Expr binary(Op op, Expr a, Expr b) {
  return std::make_shared<Node>(Node{op, 0.0, 0, 0, std::move(a), std::move(b)});
}
inline Expr power(Expr base, int n) { return std::make_shared<Node>(Node{Op::Pow, 0.0, 0, n, std::move(base), nullptr}); }

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::invalid_argument(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

class EvalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Expr parse() {
    Expr e = sum();
    skip();
    if (i_ != s_.size()) {
      if (s_[i_] == ')') throw ParseError("unbalanced ')'", i_);
      throw ParseError(std::string("unexpected '") + s_[i_] + "'", i_);
    }
    return e;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  Expr sum() {
    Expr e = product();
    while (true) {
      if (eat('+')) e = binary(Op::Add, e, product());
      else if (eat('-')) e = binary(Op::Sub, e, product());
      else return e;
    }
  }

  Expr product() {
    Expr e = unary();
    while (true) {
      if (eat('*')) e = binary(Op::Mul, e, unary());
      else if (eat('/')) e = binary(Op::Div, e, unary());
      else return e;
    }
  }

  Expr unary() {
    skip();
    const std::size_t at = i_;
    if (eat('-')) {
      skip();
      if (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) {
        const double v = number();
        skip();
        if (i_ < s_.size() && s_[i_] == '^') return binary(Op::Mul, constant(-1.0), powers(constant(v)));
        return constant(-v);
      }
      if (i_ >= s_.size()) throw ParseError("expected operand after '-'", at);
      return binary(Op::Mul, constant(-1.0), unary());
    }
    return powers(atom());
  }

  Expr powers(Expr base) {
    while (eat('^')) base = power(base, integer());
    return base;
  }

  int integer() {
    skip();
    const std::size_t at = i_;
    bool paren = eat('(');
    bool neg = eat('-');
    skip();
    std::size_t j = i_;
    while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
    if (j == i_) throw ParseError("exponent must be an integer", at);
    if (j < s_.size() && (s_[j] == '.' || s_[j] == 'e' || s_[j] == 'E'))
      throw ParseError("exponent must be an integer", at);
    const long v = std::strtol(std::string(s_.substr(i_, j - i_)).c_str(), nullptr, 10);
    if (v > 1000) throw ParseError("exponent too large", at);
    i_ = j;
    if (paren && !eat(')')) throw ParseError("expected ')'", i_);
    return static_cast<int>(neg ? -v : v);
  }

  double number() {
    const std::string rest(s_.substr(i_));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) throw ParseError("expected number", i_);
    i_ += static_cast<std::size_t>(end - rest.c_str());
    return v;
  }

  Expr atom() {
    skip();
    if (i_ >= s_.size()) throw ParseError("unexpected end of input", i_);
    const char c = s_[i_];
    if (c == '(') {
      const std::size_t open = i_;
      ++i_;
      Expr e = sum();
      if (!eat(')')) throw ParseError("unbalanced '('", open);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return constant(number());
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i_;
      while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
      const std::string_view id = s_.substr(i_, j - i_);
      if (id == "x" || id == "y" || id == "z") {
        i_ = j;
        return variable(id[0] - 'x');
      }
      throw ParseError("unknown identifier '" + std::string(id) + "'", i_);
    }
    throw ParseError(std::string("unexpected '") + c + "'", i_);
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

inline int precedence(const Node& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Pow: return 3;
    default: return 4;
  }
}

inline std::string number_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Standard precedence, parentheses, integer exponents. Errors carry the position.
inline Expr parse(std::string_view text) { return detail::Parser(text).parse(); }

/// Minimal parentheses. Negative constants print as "(-c)".
inline std::string print(const Expr& e) {
  const Node& n = *e;
  switch (n.op) {
    case Op::Const: {
      const std::string t = detail::number_text(n.value);
      return n.value < 0 || std::signbit(n.value) ? "(" + t + ")" : t;
    }
    case Op::Var: return std::string(1, static_cast<char>('x' + n.var));
    case Op::Pow: {
      std::string base = print(n.lhs);
      if (detail::precedence(*n.lhs) < 3) base = "(" + base + ")";
      return base + "^" + (n.exponent < 0 ? "(" + std::to_string(n.exponent) + ")" : std::to_string(n.exponent));
    }
    default: break;
  }
  const int p = detail::precedence(n);
  std::string a = print(n.lhs), b = print(n.rhs);
  if (detail::precedence(*n.lhs) < p) a = "(" + a + ")";
  if (detail::precedence(*n.rhs) <= p) b = "(" + b + ")";
  const char* sym = n.op == Op::Add ? " + " : n.op == Op::Sub ? " - " : n.op == Op::Mul ? "*" : "/";
  return a + sym + b;
}

inline bool equal(const Expr& a, const Expr& b) {
  if (a->op != b->op) return false;
  switch (a->op) {
    case Op::Const: return a->value == b->value;
    case Op::Var: return a->var == b->var;
    case Op::Pow: return a->exponent == b->exponent && equal(a->lhs, b->lhs);
    default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
}

inline double evaluate(const Expr& e, const Vec3& x) {
  const Node& n = *e;
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return x[n.var];
    case Op::Add: return evaluate(n.lhs, x) + evaluate(n.rhs, x);
    case Op::Sub: return evaluate(n.lhs, x) - evaluate(n.rhs, x);
    case Op::Mul: return evaluate(n.lhs, x) * evaluate(n.rhs, x);
    case Op::Div: {
      const double d = evaluate(n.rhs, x);
      if (d == 0.0 || !std::isfinite(d))
        throw EvalError("division by zero evaluating '" + print(e) + "' at (" + detail::number_text(x[0]) +
                        ", " + detail::number_text(x[1]) + ", " + detail::number_text(x[2]) + ")");
      return evaluate(n.lhs, x) / d;
    }
    case Op::Pow: {
      const double b = evaluate(n.lhs, x);
      if (n.exponent < 0 && b == 0.0) throw EvalError("zero raised to a negative power");
      return std::pow(b, n.exponent);
    }
  }
  return 0.0;
}

inline double evaluate(const Expr& e, const Vec2& x) { return evaluate(e, lift(x)); }

/// The expression as a polynomial, if it is one (division only by constants,
/// non-negative exponents).
inline std::optional<Polynomial> to_polynomial(const Expr& e) {
  const Node& n = *e;
  switch (n.op) {
    case Op::Const: return Polynomial::constant(n.value);
    case Op::Var: return Polynomial::variable(n.var);
    case Op::Pow: {
      if (n.exponent < 0) return std::nullopt;
      auto b = to_polynomial(n.lhs);
      if (!b) return std::nullopt;
      return b->pow(n.exponent);
    }
    default: break;
  }
  auto a = to_polynomial(n.lhs);
  auto b = to_polynomial(n.rhs);
  if (!a || !b) return std::nullopt;
  switch (n.op) {
    case Op::Add: return *a + *b;
    case Op::Sub: return *a - *b;
    case Op::Mul: return *a * *b;
    case Op::Div:
      if (!b->is_constant() || b->constant_term() == 0.0) return std::nullopt;
      return (1.0 / b->constant_term()) * *a;
    default: return std::nullopt;
  }
}

}  // namespace gasket::expr
