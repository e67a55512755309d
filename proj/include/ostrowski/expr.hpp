#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ostrowski::expr {

// Univariate expression trees over the variable `x`.
//
// Grammar accepted by parse():
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' factor)?          '^' is right-associative
//   base   := number | 'x' | func '(' expr ')' | '(' expr ')' | '-' base
//   func   := exp | log | cosh | sinh | abs
//
// Exponents must fold to a constant at parse time (no x in the exponent).
// Whitespace is ignored. Numbers are plain decimals with an optional
// exponent part; no hex or locale-dependent forms.

enum class NodeKind {
  Constant,
  Variable,
  Neg,
  Exp,
  Log,
  Cosh,
  Sinh,
  Abs,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
};

struct Node;
using ExprPtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind;
  double value = 0.0;  // Constant only
  ExprPtr lhs;         // unary operand or left operand
  ExprPtr rhs;         // right operand; Pow keeps a Constant here
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DeriveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline ExprPtr constant(double v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Constant;
  n->value = v;
  return n;
}

inline ExprPtr variable() {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Variable;
  return n;
}

inline bool is_const(const ExprPtr& e, double v) {
  return e->kind == NodeKind::Constant && e->value == v;
}

namespace detail {

inline ExprPtr make(NodeKind k, ExprPtr l, ExprPtr r = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

}  // namespace detail

// Constructors fold constant subexpressions and the usual 0/1 identities.
// Nothing stronger is attempted; derivative trees stay unpolished.

inline ExprPtr neg(ExprPtr e) {
  if (e->kind == NodeKind::Constant) return constant(-e->value);
  return detail::make(NodeKind::Neg, std::move(e));
}

inline ExprPtr add(ExprPtr l, ExprPtr r) {
  if (l->kind == NodeKind::Constant && r->kind == NodeKind::Constant)
    return constant(l->value + r->value);
  if (is_const(l, 0.0)) return r;
  if (is_const(r, 0.0)) return l;
  return detail::make(NodeKind::Add, std::move(l), std::move(r));
}

inline ExprPtr sub(ExprPtr l, ExprPtr r) {
  if (l->kind == NodeKind::Constant && r->kind == NodeKind::Constant)
    return constant(l->value - r->value);
  if (is_const(r, 0.0)) return l;
  return detail::make(NodeKind::Sub, std::move(l), std::move(r));
}

inline ExprPtr mul(ExprPtr l, ExprPtr r) {
  if (l->kind == NodeKind::Constant && r->kind == NodeKind::Constant)
    return constant(l->value * r->value);
  if (is_const(l, 0.0) || is_const(r, 0.0)) return constant(0.0);
  if (is_const(l, 1.0)) return r;
  if (is_const(r, 1.0)) return l;
  return detail::make(NodeKind::Mul, std::move(l), std::move(r));
}

inline ExprPtr divide(ExprPtr l, ExprPtr r) {
  if (l->kind == NodeKind::Constant && r->kind == NodeKind::Constant &&
      r->value != 0.0)
    return constant(l->value / r->value);
  if (is_const(r, 1.0)) return l;
  return detail::make(NodeKind::Div, std::move(l), std::move(r));
}

inline ExprPtr pow(ExprPtr base, ExprPtr exponent) {
  if (exponent->kind != NodeKind::Constant)
    throw std::invalid_argument("pow: exponent must be a constant");
  if (base->kind == NodeKind::Constant) {
    const double v = std::pow(base->value, exponent->value);
    if (std::isfinite(v)) return constant(v);
  }
  if (is_const(exponent, 1.0)) return base;
  if (is_const(exponent, 0.0)) return constant(1.0);
  return detail::make(NodeKind::Pow, std::move(base), std::move(exponent));
}

inline ExprPtr apply(NodeKind fn, ExprPtr e) {
  return detail::make(fn, std::move(e));
}

inline double eval(const Node& e, double x) {
  auto check = [](double v) {
    if (!std::isfinite(v)) throw EvalError("non-finite value in evaluation");
    return v;
  };
  switch (e.kind) {
    case NodeKind::Constant: return e.value;
    case NodeKind::Variable: return x;
    case NodeKind::Neg: return -eval(*e.lhs, x);
    case NodeKind::Exp: return check(std::exp(eval(*e.lhs, x)));
    case NodeKind::Log: {
      const double v = eval(*e.lhs, x);
      if (v <= 0.0) throw EvalError("log of non-positive argument");
      return check(std::log(v));
    }
    case NodeKind::Cosh: return check(std::cosh(eval(*e.lhs, x)));
    case NodeKind::Sinh: return check(std::sinh(eval(*e.lhs, x)));
    case NodeKind::Abs: return std::fabs(eval(*e.lhs, x));
    case NodeKind::Add: return check(eval(*e.lhs, x) + eval(*e.rhs, x));
    case NodeKind::Sub: return check(eval(*e.lhs, x) - eval(*e.rhs, x));
    case NodeKind::Mul: return check(eval(*e.lhs, x) * eval(*e.rhs, x));
    case NodeKind::Div: {
      const double d = eval(*e.rhs, x);
      if (d == 0.0) throw EvalError("division by zero");
      return check(eval(*e.lhs, x) / d);
    }
    case NodeKind::Pow: return check(std::pow(eval(*e.lhs, x), e.rhs->value));
  }
  throw EvalError("corrupt expression node");
}

inline double eval(const ExprPtr& e, double x) { return eval(*e, x); }

// Symbolic derivative. abs() has no derivative here; absolute values are
// applied downstream of differentiation, never inside the tree.
inline ExprPtr derive(const ExprPtr& e) {
  switch (e->kind) {
    case NodeKind::Constant: return constant(0.0);
    case NodeKind::Variable: return constant(1.0);
    case NodeKind::Neg: return neg(derive(e->lhs));
    case NodeKind::Exp: return mul(apply(NodeKind::Exp, e->lhs), derive(e->lhs));
    case NodeKind::Log: return divide(derive(e->lhs), e->lhs);
    case NodeKind::Cosh: return mul(apply(NodeKind::Sinh, e->lhs), derive(e->lhs));
    case NodeKind::Sinh: return mul(apply(NodeKind::Cosh, e->lhs), derive(e->lhs));
    case NodeKind::Abs: throw DeriveError("abs is not differentiable");
    case NodeKind::Add: return add(derive(e->lhs), derive(e->rhs));
    case NodeKind::Sub: return sub(derive(e->lhs), derive(e->rhs));
    case NodeKind::Mul:
      if (e->lhs->kind == NodeKind::Constant) return mul(e->lhs, derive(e->rhs));
      if (e->rhs->kind == NodeKind::Constant) return mul(derive(e->lhs), e->rhs);
      return add(mul(derive(e->lhs), e->rhs), mul(e->lhs, derive(e->rhs)));
    case NodeKind::Div:
      if (e->rhs->kind == NodeKind::Constant) return divide(derive(e->lhs), e->rhs);
      return divide(sub(mul(derive(e->lhs), e->rhs), mul(e->lhs, derive(e->rhs))),
                    mul(e->rhs, e->rhs));
    case NodeKind::Pow: {
      const double k = e->rhs->value;
      return mul(mul(constant(k), pow(e->lhs, constant(k - 1.0))), derive(e->lhs));
    }
  }
  throw DeriveError("corrupt expression node");
}

// Fully parenthesized rendering; parse(to_string(e)) reproduces e.
inline std::string to_string(const ExprPtr& e) {
  switch (e->kind) {
    case NodeKind::Constant: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", e->value);
      return buf;
    }
    case NodeKind::Variable: return "x";
    case NodeKind::Neg: return "(-" + to_string(e->lhs) + ")";
    case NodeKind::Exp: return "exp(" + to_string(e->lhs) + ")";
    case NodeKind::Log: return "log(" + to_string(e->lhs) + ")";
    case NodeKind::Cosh: return "cosh(" + to_string(e->lhs) + ")";
    case NodeKind::Sinh: return "sinh(" + to_string(e->lhs) + ")";
    case NodeKind::Abs: return "abs(" + to_string(e->lhs) + ")";
    case NodeKind::Add: return "(" + to_string(e->lhs) + "+" + to_string(e->rhs) + ")";
    case NodeKind::Sub: return "(" + to_string(e->lhs) + "-" + to_string(e->rhs) + ")";
    case NodeKind::Mul: return "(" + to_string(e->lhs) + "*" + to_string(e->rhs) + ")";
    case NodeKind::Div: return "(" + to_string(e->lhs) + "/" + to_string(e->rhs) + ")";
    case NodeKind::Pow: return "(" + to_string(e->lhs) + "^" + to_string(e->rhs) + ")";
  }
  return "?";
}

inline bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case NodeKind::Constant: return a->value == b->value;
    case NodeKind::Variable: return true;
    default:
      if (!structurally_equal(a->lhs, b->lhs)) return false;
      if (a->rhs || b->rhs)
        return a->rhs && b->rhs && structurally_equal(a->rhs, b->rhs);
      return true;
  }
}

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  ExprPtr run() {
    ExprPtr e = parse_expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    for (;;) {
      if (accept('+'))
        e = add(std::move(e), parse_term());
      else if (accept('-'))
        e = sub(std::move(e), parse_term());
      else
        return e;
    }
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_factor();
    for (;;) {
      if (accept('*'))
        e = mul(std::move(e), parse_factor());
      else if (accept('/'))
        e = divide(std::move(e), parse_factor());
      else
        return e;
    }
  }

  ExprPtr parse_factor() {
    ExprPtr base = parse_base();
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '^') {
      const std::size_t caret = pos_;
      ++pos_;
      ExprPtr exponent = parse_factor();
      if (exponent->kind != NodeKind::Constant)
        throw ParseError("exponent must be a constant", caret);
      return pow(std::move(base), std::move(exponent));
    }
    return base;
  }

  ExprPtr parse_base() {
    const char c = peek();
    if (c == '\0') throw ParseError("unexpected end of input", pos_);
    if (c == '-') {
      ++pos_;
      return neg(parse_base());
    }
    if (c == '(') {
      ++pos_;
      ExprPtr e = parse_expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if ((c >= '0' && c <= '9') || c == '.') return parse_number();
    if (c >= 'a' && c <= 'z') return parse_ident();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  ExprPtr parse_number() {
    double v = 0.0;
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc()) throw ParseError("malformed number", pos_);
    pos_ += static_cast<std::size_t>(ptr - first);
    return constant(v);
  }

  ExprPtr parse_ident() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] >= 'a' && s_[pos_] <= 'z') ++pos_;
    const std::string_view name = s_.substr(start, pos_ - start);
    if (name == "x") return variable();
    NodeKind fn;
    if (name == "exp")
      fn = NodeKind::Exp;
    else if (name == "log")
      fn = NodeKind::Log;
    else if (name == "cosh")
      fn = NodeKind::Cosh;
    else if (name == "sinh")
      fn = NodeKind::Sinh;
    else if (name == "abs")
      fn = NodeKind::Abs;
    else
      throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    if (!accept('(')) throw ParseError("expected '(' after function name", pos_);
    ExprPtr arg = parse_expr();
    if (!accept(')')) throw ParseError("expected ')'", pos_);
    return apply(fn, std::move(arg));
  }
};

}  // namespace detail

inline ExprPtr parse(std::string_view text) { return detail::Parser(text).run(); }

}  // namespace ostrowski::expr
