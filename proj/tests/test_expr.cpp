#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "norden/errors.hpp"
#include "norden/expr.hpp"
#include "support/oracles.hpp"

using norden::parse;
using norden::ParseError;
using norden::ParseErrorKind;

namespace {

double ev(const char* s, std::vector<double> p = {0.0, 0.0, 0.0, 0.0}) {
  return parse(s, static_cast<int>(p.size())).eval(p);
}

ParseErrorKind kind_of(const char* s) {
  try {
    (void)parse(s, 4);
  } catch (const ParseError& e) {
    return e.kind();
  }
  FAIL("expected a parse error for " << s);
  return ParseErrorKind::syntax;
}

}  // namespace

TEST_CASE("precedence and associativity") {
  CHECK(ev("1 + 2*3") == 7.0);
  CHECK(ev("8 - 3 - 2") == 3.0);
  CHECK(ev("8/4/2") == 1.0);
  CHECK(ev("-2^2") == -4.0);
  CHECK(ev("(-2)^2") == 4.0);
  CHECK(ev("2^-1") == 0.5);
  CHECK(ev("--3") == 3.0);
  CHECK(ev("pi") == doctest::Approx(M_PI));
  CHECK(ev("e") == doctest::Approx(M_E));
  CHECK(ev("1.5e2 + .5") == 150.5);
}

TEST_CASE("coordinates are one-based") {
  CHECK(ev("x1 - 2*x4", {1.0, 2.0, 3.0, 4.0}) == -7.0);
  CHECK(parse("x2*sin(x3) + x2", 4).free_variables() == std::set<int>{2, 3});
}

TEST_CASE("functions") {
  const std::vector<double> p{0.3, -0.2, 0.5, 0.1};
  CHECK(ev("sin(x1)*cos(x2) + tan(x3)", p) == doctest::Approx(std::sin(0.3) * std::cos(-0.2) + std::tan(0.5)));
  CHECK(ev("exp(x1) + log(x3) + sqrt(x3)", p) == doctest::Approx(std::exp(0.3) + std::log(0.5) + std::sqrt(0.5)));
  CHECK(ev("sinh(x2) + cosh(x2) + tanh(x4)", p) ==
        doctest::Approx(std::sinh(-0.2) + std::cosh(-0.2) + std::tanh(0.1)));
}

TEST_CASE("parse errors carry kind and offset") {
  CHECK(kind_of("x1 +") == ParseErrorKind::syntax);
  CHECK(kind_of("foo(x1)") == ParseErrorKind::unknown_identifier);
  CHECK(kind_of("x5") == ParseErrorKind::coordinate_range);
  CHECK(kind_of("x0") == ParseErrorKind::coordinate_range);
  CHECK(kind_of("x1^2.5") == ParseErrorKind::non_integer_exponent);
  CHECK(kind_of("x1^x2") == ParseErrorKind::non_integer_exponent);
  CHECK(kind_of("(x1") == ParseErrorKind::syntax);
  try {
    (void)parse("x1 + * x2", 4);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 5);
  }
}

TEST_CASE("evaluation errors name the failing sub-expression") {
  const auto e = parse("x1 + log(x2 - 1)", 2);
  try {
    (void)e.eval(std::vector<double>{0.0, 0.5});
    FAIL("log of a negative number must throw");
  } catch (const norden::EvalError& err) {
    CHECK(err.span().find("log") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("1/x1", 2).eval(std::vector<double>{0.0, 1.0}), norden::EvalError);
  CHECK_THROWS_AS(parse("x1", 2).eval(std::vector<double>{0.0}), norden::ArgumentError);
}

TEST_CASE("print round-trips") {
  oracle::ExpressionGenerator gen(4, 7);
  for (int k = 0; k < 200; ++k) {
    const auto e = parse(gen.next(), 4);
    const auto again = parse(e.print(), 4);
    CHECK(e.same_tree(again));
  }
}

TEST_CASE("jets of random expressions against finite differences") {
  oracle::ExpressionGenerator gen(4, 2024);
  int checked = 0;
  for (int k = 0; k < 300; ++k) {
    const auto e = parse(gen.next(), 4);
    const auto p = gen.point();
    const norden::Jet j = e.eval_jet(p, 2);
    CHECK(j.value() == doctest::Approx(e.eval(p)));
    for (int i = 0; i < 4; ++i) {
      CHECK(oracle::rel_err(j.grad(i), oracle::central_diff(e, p, i)) <= 1e-4);
      for (int l = 0; l < 4; ++l) CHECK(oracle::rel_err(j.hess(i, l), oracle::central_diff2(e, p, i, l)) <= 1e-4);
    }
    ++checked;
  }
  CHECK(checked == 300);
}
