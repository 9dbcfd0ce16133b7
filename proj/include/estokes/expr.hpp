#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace estokes {

// Arithmetic expression over x, y: literals, + - * / ^, unary minus,
// sin/cos/exp/sqrt, constant pi. Immutable after parse; evaluation is
// reentrant.
struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ParseError : std::runtime_error {
  std::size_t position;  // 0-based character offset into the input
  ParseError(const std::string& what, std::size_t pos);
};

struct EvalError : std::runtime_error {
  std::string subexpression;  // printed form of the offending node
  EvalError(const std::string& what, std::string subexpr);
};

Expr parse(const std::string& text);
double evaluate(const Expr& expr, double x, double y);

// Fully parenthesized form; parse(print(e)) is structurally identical to e.
std::string print(const Expr& expr);

bool structurally_equal(const Expr& a, const Expr& b);

}  // namespace estokes
