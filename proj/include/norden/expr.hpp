#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>

#include "norden/jet.hpp"

namespace norden {

enum class Function { sin, cos, tan, exp, log, sqrt, sinh, cosh, tanh };

std::string_view function_name(Function fn);

/// Parsed analytic expression over coordinates x1..xdim.
///
/// Grammar (whitespace insignificant):
///
///     expr  := term (("+" | "-") term)*
///     term  := unary (("*" | "/") unary)*
///     unary := "-" unary | power
///     power := atom ("^" int)?
///     atom  := number | "pi" | "e" | "x" int | fn "(" expr ")" | "(" expr ")"
///
/// so "^" binds tighter than unary minus: "-x1^2" is -(x1^2). Exponents are
/// integer literals and may carry a sign ("x1^-2").
class Expression {
 public:
  struct Node;

  Expression() = default;

  /// Declared coordinate count the expression was bound against.
  int dim() const noexcept { return dim_; }
  const std::string& source() const noexcept { return source_; }
  const Node& root() const { return *root_; }
  bool empty() const noexcept { return !root_; }

  /// Jet of the expression at `point` (length dim), exact to `order`.
  /// Throws EvalError annotated with the failing sub-expression text.
  Jet eval_jet(std::span<const double> point, int order) const;
  double eval(std::span<const double> point) const;

  /// 1-based coordinate indices that occur in the expression.
  std::set<int> free_variables() const;

  /// Canonical text form with minimal parentheses; reparses to the same tree.
  std::string print() const;

  /// Structural equality of the two trees (source text is ignored).
  bool same_tree(const Expression& other) const;

 private:
  friend Expression parse(std::string_view text, int dim);
  std::shared_ptr<const Node> root_;
  std::string source_;
  int dim_ = 0;
};

struct Expression::Node {
  enum class Kind { number, constant_pi, constant_e, coordinate, negate, add, sub, mul, div, power, call };

  Kind kind = Kind::number;
  double number = 0.0;
  int coordinate = 0;  // 1-based
  int exponent = 0;
  Function function = Function::sin;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
  /// Byte range of this node in the source text.
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Throws ParseError with the byte offset of the problem.
Expression parse(std::string_view text, int dim);

}  // namespace norden
