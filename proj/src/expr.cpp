#include "norden/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "norden/errors.hpp"

namespace norden {

namespace {

using Node = Expression::Node;
using Kind = Node::Kind;
using NodePtr = std::shared_ptr<const Node>;

constexpr std::array<std::pair<std::string_view, Function>, 9> kFunctions{{
    {"sin", Function::sin},
    {"cos", Function::cos},
    {"tan", Function::tan},
    {"exp", Function::exp},
    {"log", Function::log},
    {"sqrt", Function::sqrt},
    {"sinh", Function::sinh},
    {"cosh", Function::cosh},
    {"tanh", Function::tanh},
}};

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
 public:
  Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  NodePtr parse_all() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail(ParseErrorKind::syntax, pos_, "unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(ParseErrorKind kind, std::size_t at, const std::string& msg) const {
    throw ParseError(kind, at, msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  static NodePtr binary(Kind kind, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->begin = lhs->begin;
    n->end = rhs->end;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (true) {
      if (peek('+')) {
        ++pos_;
        lhs = binary(Kind::add, lhs, parse_term());
      } else if (peek('-')) {
        ++pos_;
        lhs = binary(Kind::sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    while (true) {
      if (peek('*')) {
        ++pos_;
        lhs = binary(Kind::mul, lhs, parse_unary());
      } else if (peek('/')) {
        ++pos_;
        lhs = binary(Kind::div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (peek('-')) {
      const std::size_t start = pos_++;
      NodePtr operand = parse_unary();
      auto n = std::make_shared<Node>();
      n->kind = Kind::negate;
      n->begin = start;
      n->end = operand->end;
      n->lhs = std::move(operand);
      return n;
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (!peek('^')) return base;
    ++pos_;
    skip_ws();
    const std::size_t start = pos_;
    bool negative = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      negative = text_[pos_] == '-';
      ++pos_;
    }
    if (pos_ >= text_.size() || !is_digit(text_[pos_]))
      fail(ParseErrorKind::non_integer_exponent, start, "exponent must be an integer literal");
    const std::size_t digits = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E'))
      fail(ParseErrorKind::non_integer_exponent, start, "exponent must be an integer literal");
    int value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + digits, text_.data() + pos_, value);
    if (ec != std::errc{}) fail(ParseErrorKind::syntax, digits, "exponent out of range");
    auto n = std::make_shared<Node>();
    n->kind = Kind::power;
    n->exponent = negative ? -value : value;
    n->begin = base->begin;
    n->end = pos_;
    n->lhs = std::move(base);
    return n;
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && is_digit(text_[p])) {
        while (p < text_.size() && is_digit(text_[p])) ++p;
        pos_ = p;
      }
    }
    if (pos_ == start + 1 && text_[start] == '.') fail(ParseErrorKind::syntax, start, "malformed number");
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc{} || ptr != text_.data() + pos_)
      fail(ParseErrorKind::syntax, start, "malformed number");
    auto n = std::make_shared<Node>();
    n->kind = Kind::number;
    n->number = value;
    n->begin = start;
    n->end = pos_;
    return n;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail(ParseErrorKind::syntax, pos_, "unexpected end of input");
    const char c = text_[pos_];
    const std::size_t start = pos_;
    if (is_digit(c) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      if (!peek(')')) fail(ParseErrorKind::syntax, pos_, "expected ')'");
      ++pos_;
      return inner;
    }
    if (!is_ident_start(c)) fail(ParseErrorKind::syntax, start, "unexpected '" + std::string(1, c) + "'");
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    const std::string_view ident = text_.substr(start, pos_ - start);
    auto n = std::make_shared<Node>();
    n->begin = start;
    n->end = pos_;
    if (ident == "pi") {
      n->kind = Kind::constant_pi;
      return n;
    }
    if (ident == "e") {
      n->kind = Kind::constant_e;
      return n;
    }
    if (ident.size() > 1 && ident[0] == 'x' &&
        ident.find_first_not_of("0123456789", 1) == std::string_view::npos) {
      int index = 0;
      auto [ptr, ec] = std::from_chars(ident.data() + 1, ident.data() + ident.size(), index);
      if (ec != std::errc{} || index < 1 || index > dim_)
        fail(ParseErrorKind::coordinate_range, start,
             "coordinate " + std::string(ident) + " out of range 1.." + std::to_string(dim_));
      n->kind = Kind::coordinate;
      n->coordinate = index;
      return n;
    }
    for (const auto& [name, fn] : kFunctions) {
      if (ident != name) continue;
      if (!peek('(')) fail(ParseErrorKind::syntax, pos_, "expected '(' after " + std::string(name));
      ++pos_;
      NodePtr arg = parse_expr();
      if (!peek(')')) fail(ParseErrorKind::syntax, pos_, "expected ')'");
      ++pos_;
      n->kind = Kind::call;
      n->function = fn;
      n->lhs = std::move(arg);
      n->end = pos_;
      return n;
    }
    fail(ParseErrorKind::unknown_identifier, start, "unknown identifier '" + std::string(ident) + "'");
  }

  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;
};

Jet apply(Function fn, const Jet& a) {
  switch (fn) {
    case Function::sin: return sin(a);
    case Function::cos: return cos(a);
    case Function::tan: return tan(a);
    case Function::exp: return exp(a);
    case Function::log: return log(a);
    case Function::sqrt: return sqrt(a);
    case Function::sinh: return sinh(a);
    case Function::cosh: return cosh(a);
    case Function::tanh: return tanh(a);
  }
  throw ArgumentError("unknown function");
}

struct EvalContext {
  std::span<const double> point;
  int dim;
  int order;
  const std::string& source;
};

Jet eval_node(const Node& n, const EvalContext& ctx) {
  try {
    switch (n.kind) {
      case Kind::number: return Jet::constant(n.number, ctx.dim, ctx.order);
      case Kind::constant_pi: return Jet::constant(std::numbers::pi, ctx.dim, ctx.order);
      case Kind::constant_e: return Jet::constant(std::numbers::e, ctx.dim, ctx.order);
      case Kind::coordinate:
        return Jet::coordinate(n.coordinate - 1, ctx.point[n.coordinate - 1], ctx.dim, ctx.order);
      case Kind::negate: return -eval_node(*n.lhs, ctx);
      case Kind::add: return eval_node(*n.lhs, ctx) + eval_node(*n.rhs, ctx);
      case Kind::sub: return eval_node(*n.lhs, ctx) - eval_node(*n.rhs, ctx);
      case Kind::mul: return eval_node(*n.lhs, ctx) * eval_node(*n.rhs, ctx);
      case Kind::div: return eval_node(*n.lhs, ctx) / eval_node(*n.rhs, ctx);
      case Kind::power: return pow(eval_node(*n.lhs, ctx), n.exponent);
      case Kind::call: return apply(n.function, eval_node(*n.lhs, ctx));
    }
  } catch (const EvalError& e) {
    if (!e.span().empty()) throw;
    throw EvalError(e.reason(), ctx.source.substr(n.begin, n.end - n.begin));
  }
  throw ArgumentError("corrupt expression node");
}

void collect(const Node& n, std::set<int>& out) {
  if (n.kind == Kind::coordinate) out.insert(n.coordinate);
  if (n.lhs) collect(*n.lhs, out);
  if (n.rhs) collect(*n.rhs, out);
}

int precedence(const Node& n) {
  switch (n.kind) {
    case Kind::add:
    case Kind::sub: return 1;
    case Kind::mul:
    case Kind::div: return 2;
    case Kind::negate: return 3;
    case Kind::power: return 4;
    default: return 5;
  }
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string print_node(const Node& n);

std::string print_operand(const Node& n, int min_precedence) {
  std::string s = print_node(n);
  return precedence(n) < min_precedence ? "(" + s + ")" : s;
}

std::string print_node(const Node& n) {
  switch (n.kind) {
    case Kind::number: return format_number(n.number);
    case Kind::constant_pi: return "pi";
    case Kind::constant_e: return "e";
    case Kind::coordinate: return "x" + std::to_string(n.coordinate);
    case Kind::negate: return "-" + print_operand(*n.lhs, 3);
    case Kind::add: return print_operand(*n.lhs, 1) + "+" + print_operand(*n.rhs, 2);
    case Kind::sub: return print_operand(*n.lhs, 1) + "-" + print_operand(*n.rhs, 2);
    case Kind::mul: return print_operand(*n.lhs, 2) + "*" + print_operand(*n.rhs, 3);
    case Kind::div: return print_operand(*n.lhs, 2) + "/" + print_operand(*n.rhs, 3);
    case Kind::power: return print_operand(*n.lhs, 5) + "^" + std::to_string(n.exponent);
    case Kind::call:
      return std::string(function_name(n.function)) + "(" + print_node(*n.lhs) + ")";
  }
  return {};
}

bool same_node(const Node* a, const Node* b) {
  if (a == nullptr || b == nullptr) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::number:
      if (a->number != b->number) return false;
      break;
    case Kind::coordinate:
      if (a->coordinate != b->coordinate) return false;
      break;
    case Kind::power:
      if (a->exponent != b->exponent) return false;
      break;
    case Kind::call:
      if (a->function != b->function) return false;
      break;
    default: break;
  }
  return same_node(a->lhs.get(), b->lhs.get()) && same_node(a->rhs.get(), b->rhs.get());
}

}  // namespace

std::string_view function_name(Function fn) {
  for (const auto& [name, f] : kFunctions)
    if (f == fn) return name;
  return "?";
}

Expression parse(std::string_view text, int dim) {
  if (dim < 1) throw ArgumentError("expression dimension must be positive");
  Expression e;
  e.root_ = Parser(text, dim).parse_all();
  e.source_ = std::string(text);
  e.dim_ = dim;
  return e;
}

Jet Expression::eval_jet(std::span<const double> point, int order) const {
  if (!root_) throw ArgumentError("evaluating an empty expression");
  if (static_cast<int>(point.size()) != dim_)
    throw ArgumentError("point has " + std::to_string(point.size()) + " coordinates, expression expects " +
                        std::to_string(dim_));
  const EvalContext ctx{point, dim_, order, source_};
  Jet j = eval_node(*root_, ctx);
  if (!j.is_finite()) throw EvalError("non-finite result", source_);
  return j;
}

double Expression::eval(std::span<const double> point) const { return eval_jet(point, 0).value(); }

std::set<int> Expression::free_variables() const {
  std::set<int> out;
  if (root_) collect(*root_, out);
  return out;
}

std::string Expression::print() const { return root_ ? print_node(*root_) : std::string(); }

bool Expression::same_tree(const Expression& other) const {
  return same_node(root_.get(), other.root_.get());
}

}  // namespace norden
