#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "zermelo/expression.hpp"

using namespace zermelo;

TEST_CASE("arithmetic and precedence") {
  const Expression e = Expression::parse("1+2*3-4/2");
  CHECK(e.eval(0, 0, 0).v == doctest::Approx(5.0));
  CHECK(Expression::parse("2*(3+4)").eval(0, 0, 0).v == doctest::Approx(14.0));
  CHECK(Expression::parse("-3+5").eval(0, 0, 0).v == doctest::Approx(2.0));
  CHECK(Expression::parse("2--3").eval(0, 0, 0).v == doctest::Approx(5.0));
}

TEST_CASE("variables and constants") {
  const Expression e = Expression::parse("t+2*x-y");
  const FieldEval r = e.eval(1.0, 2.0, 3.0);
  CHECK(r.v == doctest::Approx(2.0));
  CHECK(r.dt == doctest::Approx(1.0));
  CHECK(r.dx == doctest::Approx(2.0));
  CHECK(r.dy == doctest::Approx(-1.0));
  CHECK(Expression::parse("pi").eval(0, 0, 0).v == doctest::Approx(M_PI));
  CHECK(Expression::parse("1.5e2").eval(0, 0, 0).v == doctest::Approx(150.0));
}

TEST_CASE("functions with forward-mode partials") {
  const FieldEval s = Expression::parse("sin(t*x)").eval(0.5, 2.0, 0.0);
  CHECK(s.v == doctest::Approx(std::sin(1.0)));
  CHECK(s.dt == doctest::Approx(2.0 * std::cos(1.0)));
  CHECK(s.dx == doctest::Approx(0.5 * std::cos(1.0)));
  CHECK(s.dy == doctest::Approx(0.0));

  const FieldEval c = Expression::parse("cos(y)").eval(0, 0, 0.3);
  CHECK(c.v == doctest::Approx(std::cos(0.3)));
  CHECK(c.dy == doctest::Approx(-std::sin(0.3)));

  const FieldEval a = Expression::parse("3*arctan(y)").eval(0, 0, 1.0);
  CHECK(a.v == doctest::Approx(3.0 * M_PI / 4.0));
  CHECK(a.dy == doctest::Approx(1.5));
}

TEST_CASE("division partials") {
  const FieldEval r = Expression::parse("t/y").eval(6.0, 0.0, 2.0);
  CHECK(r.v == doctest::Approx(3.0));
  CHECK(r.dt == doctest::Approx(0.5));
  CHECK(r.dy == doctest::Approx(-1.5));
}

TEST_CASE("structural classification") {
  CHECK(Expression::parse("1+2*sin(t)").time_only());
  CHECK_FALSE(Expression::parse("1+x").time_only());
  CHECK_FALSE(Expression::parse("cos(y)").time_only());
  CHECK(Expression::parse("3*(1+2)").is_constant());
  CHECK_FALSE(Expression::parse("t").is_constant());
  CHECK(Expression::constant(4.5).is_constant());
  CHECK(Expression::constant(4.5).eval(1, 2, 3).v == doctest::Approx(4.5));
}

TEST_CASE("parse errors carry a character offset") {
  CHECK_THROWS_AS(Expression::parse("1+"), std::invalid_argument);
  CHECK_THROWS_AS(Expression::parse("sin 3"), std::invalid_argument);
  CHECK_THROWS_AS(Expression::parse("(1+2"), std::invalid_argument);
  CHECK_THROWS_AS(Expression::parse("1 + bogus"), std::invalid_argument);
  CHECK_THROWS_AS(Expression::parse(""), std::invalid_argument);
  try {
    Expression::parse("1 + bogus");
  } catch (const std::invalid_argument& ex) {
    CHECK(std::string(ex.what()).find("offset") != std::string::npos);
  }
}

TEST_CASE("text round-trips through parse") {
  const char* samples[] = {"1+2*3", "2+0.5*sin(t)", "3*arctan(y)", "-cos(t*pi/4)",
                           "1/(2+cos(x))"};
  for (const char* s : samples) {
    const Expression a = Expression::parse(s);
    const Expression b = Expression::parse(a.text());
    for (double t : {0.0, 0.7, 2.0})
      for (double x : {0.0, 1.3})
        for (double y : {0.5, 2.0}) {
          CHECK(a.eval(t, x, y).v == doctest::Approx(b.eval(t, x, y).v).epsilon(1e-14));
        }
  }
}
