#include <doctest.h>

#include <cmath>

#include "driftflow/expression.hpp"
#include "driftflow/models.hpp"

using namespace driftflow;

TEST_CASE("expression arithmetic and precedence") {
  CHECK(Expression::parse("2+3*4").eval(0.0) == 14.0);
  CHECK(Expression::parse("2*3+4").eval(0.0) == 10.0);
  CHECK(Expression::parse("(2+3)*4").eval(0.0) == 20.0);
  CHECK(Expression::parse("7-4-2").eval(0.0) == 1.0);      // left associative
  CHECK(Expression::parse("8/4/2").eval(0.0) == 1.0);
  CHECK(Expression::parse("2^3^2").eval(0.0) == 512.0);    // right associative
  CHECK(Expression::parse("2^-3").eval(0.0) == 0.125);
  CHECK(Expression::parse("-x^2").eval(3.0) == -9.0);      // unary binds after ^
  CHECK(Expression::parse("(-x)^2").eval(3.0) == 9.0);
  CHECK(Expression::parse("--x").eval(5.0) == 5.0);
  CHECK(Expression::parse(" 1.5e2 + .5 ").eval(0.0) == 150.5);
}

TEST_CASE("expression functions and the variable") {
  CHECK(Expression::parse("x").eval(2.5) == 2.5);
  CHECK(Expression::parse("exp(0)").eval(0.0) == 1.0);
  CHECK(Expression::parse("log(exp(3))").eval(0.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(Expression::parse("exp(-x^2/2)").eval(1.0) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(Expression::parse("0").eval(123.0) == 0.0);
}

TEST_CASE("expression matches the linear likelihood pointwise") {
  const Expression expr = Expression::parse("-(x-1)^2/2");
  const Likelihood lik = linear_likelihood(1.0, 1.0);
  for (double x = -4.0; x <= 4.0; x += 0.0625) {
    CHECK(expr.eval(x) == lik.log_eval(x));  // bit-identical routes
  }
}

TEST_CASE("parse errors carry the offset") {
  const auto offset_of = [](const char* text) {
    try {
      Expression::parse(text);
    } catch (const ExpressionError& e) {
      return e.offset();
    }
    return static_cast<std::size_t>(-1);
  };
  CHECK(offset_of("(x+") == 3);      // operand expected past the end
  CHECK(offset_of("(x+1") == 4);     // missing ')'
  CHECK(offset_of("x+*2") == 2);     // operator where an operand belongs
  CHECK(offset_of("foo(x)") == 0);   // unknown identifier
  CHECK(offset_of("x 5") == 2);      // trailing input
  CHECK(offset_of("exp x") == 4);    // missing '(' after the function
  CHECK(offset_of("") == 0);
  CHECK(Expression::parse("x+1").text() == "x+1");
}
