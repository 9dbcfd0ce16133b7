#include "estokes/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

namespace estokes {

enum class NodeKind { Literal, VarX, VarY, Pi, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Sqrt };

struct ExprNode {
  NodeKind kind;
  double value = 0.0;  // Literal only
  Expr lhs;            // unary operand / left operand
  Expr rhs;            // right operand of binary ops
};

ParseError::ParseError(const std::string& what, std::size_t pos)
    : std::runtime_error(what + " at position " + std::to_string(pos)), position(pos) {}

EvalError::EvalError(const std::string& what, std::string subexpr)
    : std::runtime_error(what + " in '" + subexpr + "'"), subexpression(std::move(subexpr)) {}

namespace {

Expr make(NodeKind k, Expr lhs = nullptr, Expr rhs = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

Expr make_literal(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Literal;
  n->value = v;
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  Expr run() {
    Expr e = sum();
    skip_space();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Expr sum() {
    Expr e = product();
    while (true) {
      if (consume('+')) e = make(NodeKind::Add, e, product());
      else if (consume('-')) e = make(NodeKind::Sub, e, product());
      else return e;
    }
  }

  Expr product() {
    Expr e = unary();
    while (true) {
      if (consume('*')) e = make(NodeKind::Mul, e, unary());
      else if (consume('/')) e = make(NodeKind::Div, e, unary());
      else return e;
    }
  }

  Expr unary() {
    if (consume('-')) return make(NodeKind::Neg, unary());
    return power();
  }

  // ^ binds tighter than unary minus and is right-associative; the exponent
  // may itself start with a unary minus (2^-3).
  Expr power() {
    Expr base = primary();
    if (consume('^')) return make(NodeKind::Pow, base, unary());
    return base;
  }

  Expr primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = sum();
      if (!consume(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  Expr number() {
    const std::size_t start = pos_;
    std::size_t consumed = 0;
    double v;
    try {
      v = std::stod(text_.substr(start), &consumed);
    } catch (const std::exception&) {
      throw ParseError("malformed number", start);
    }
    // stod accepts leading signs and hex; restrict to plain decimals here by
    // re-scanning the accepted span.
    std::size_t end = start;
    bool seen_e = false;
    while (end < start + consumed) {
      const char ch = text_[end];
      if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
        ++end;
      } else if ((ch == 'e' || ch == 'E') && !seen_e) {
        seen_e = true;
        ++end;
        if (end < text_.size() && (text_[end] == '+' || text_[end] == '-')) ++end;
      } else {
        break;
      }
    }
    if (end == start) throw ParseError("malformed number", start);
    try {
      v = std::stod(text_.substr(start, end - start));
    } catch (const std::exception&) {
      throw ParseError("malformed number", start);
    }
    pos_ = end;
    return make_literal(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string name = text_.substr(start, pos_ - start);
    if (name == "x") return make(NodeKind::VarX);
    if (name == "y") return make(NodeKind::VarY);
    if (name == "pi") return make(NodeKind::Pi);
    NodeKind fn;
    if (name == "sin") fn = NodeKind::Sin;
    else if (name == "cos") fn = NodeKind::Cos;
    else if (name == "exp") fn = NodeKind::Exp;
    else if (name == "sqrt") fn = NodeKind::Sqrt;
    else throw ParseError("unknown identifier '" + name + "'", start);
    if (!consume('(')) throw ParseError("expected '(' after '" + name + "'", pos_);
    Expr arg = sum();
    if (!consume(')')) throw ParseError("expected ')'", pos_);
    return make(fn, std::move(arg));
  }
};

void print_to(const Expr& e, std::ostream& os) {
  switch (e->kind) {
    case NodeKind::Literal: {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << e->value;
      os << tmp.str();
      break;
    }
    case NodeKind::VarX: os << "x"; break;
    case NodeKind::VarY: os << "y"; break;
    case NodeKind::Pi: os << "pi"; break;
    case NodeKind::Add: os << "("; print_to(e->lhs, os); os << "+"; print_to(e->rhs, os); os << ")"; break;
    case NodeKind::Sub: os << "("; print_to(e->lhs, os); os << "-"; print_to(e->rhs, os); os << ")"; break;
    case NodeKind::Mul: os << "("; print_to(e->lhs, os); os << "*"; print_to(e->rhs, os); os << ")"; break;
    case NodeKind::Div: os << "("; print_to(e->lhs, os); os << "/"; print_to(e->rhs, os); os << ")"; break;
    case NodeKind::Pow: os << "("; print_to(e->lhs, os); os << "^"; print_to(e->rhs, os); os << ")"; break;
    case NodeKind::Neg: os << "(-"; print_to(e->lhs, os); os << ")"; break;
    case NodeKind::Sin: os << "sin("; print_to(e->lhs, os); os << ")"; break;
    case NodeKind::Cos: os << "cos("; print_to(e->lhs, os); os << ")"; break;
    case NodeKind::Exp: os << "exp("; print_to(e->lhs, os); os << ")"; break;
    case NodeKind::Sqrt: os << "sqrt("; print_to(e->lhs, os); os << ")"; break;
  }
}

double eval_node(const ExprNode& e, double x, double y) {
  switch (e.kind) {
    case NodeKind::Literal: return e.value;
    case NodeKind::VarX: return x;
    case NodeKind::VarY: return y;
    case NodeKind::Pi: return std::numbers::pi;
    case NodeKind::Add: return eval_node(*e.lhs, x, y) + eval_node(*e.rhs, x, y);
    case NodeKind::Sub: return eval_node(*e.lhs, x, y) - eval_node(*e.rhs, x, y);
    case NodeKind::Mul: return eval_node(*e.lhs, x, y) * eval_node(*e.rhs, x, y);
    case NodeKind::Div: {
      const double den = eval_node(*e.rhs, x, y);
      if (den == 0.0) {
        throw EvalError("division by zero", print(std::make_shared<const ExprNode>(e)));
      }
      return eval_node(*e.lhs, x, y) / den;
    }
    case NodeKind::Pow: {
      const double b = eval_node(*e.lhs, x, y);
      const double p = eval_node(*e.rhs, x, y);
      const double r = std::pow(b, p);
      if (!std::isfinite(r)) {
        throw EvalError("power out of domain", print(std::make_shared<const ExprNode>(e)));
      }
      return r;
    }
    case NodeKind::Neg: return -eval_node(*e.lhs, x, y);
    case NodeKind::Sin: return std::sin(eval_node(*e.lhs, x, y));
    case NodeKind::Cos: return std::cos(eval_node(*e.lhs, x, y));
    case NodeKind::Exp: return std::exp(eval_node(*e.lhs, x, y));
    case NodeKind::Sqrt: {
      const double v = eval_node(*e.lhs, x, y);
      if (v < 0.0) {
        throw EvalError("sqrt of negative value", print(std::make_shared<const ExprNode>(e)));
      }
      return std::sqrt(v);
    }
  }
  throw std::logic_error("eval_node: unreachable");
}

}  // namespace

Expr parse(const std::string& text) { return Parser(text).run(); }

double evaluate(const Expr& expr, double x, double y) {
  if (!expr) throw std::invalid_argument("evaluate: null expression");
  return eval_node(*expr, x, y);
}

std::string print(const Expr& expr) {
  if (!expr) throw std::invalid_argument("print: null expression");
  std::ostringstream os;
  print_to(expr, os);
  return os.str();
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  if (a->kind == NodeKind::Literal && a->value != b->value) return false;
  if ((a->lhs == nullptr) != (b->lhs == nullptr)) return false;
  if ((a->rhs == nullptr) != (b->rhs == nullptr)) return false;
  if (a->lhs && !structurally_equal(a->lhs, b->lhs)) return false;
  if (a->rhs && !structurally_equal(a->rhs, b->rhs)) return false;
  return true;
}

}  // namespace estokes
