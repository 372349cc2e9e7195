#include <cmath>

#include "doctest.h"
#include "nsdyn/expr.hpp"

using namespace nsdyn;
using namespace nsdyn::expr;

TEST_CASE("precedence and associativity") {
  CHECK(eval(parse("-x^2"), {{"x", 3.0}}) == -9.0);
  CHECK(eval(parse("2^3^2"), {}) == 512.0);
  CHECK(eval(parse("1-2-3"), {}) == -4.0);
  CHECK(eval(parse("8/4/2"), {}) == 1.0);
  CHECK(eval(parse("2*-3"), {}) == -6.0);
  CHECK(eval(parse("2^-1"), {}) == 0.5);
  CHECK(eval(parse("(1+2)*3"), {}) == 9.0);
}

TEST_CASE("functions and scientific numbers") {
  const Bindings b{{"x1", 0.3}, {"x2", -1.5}};
  CHECK(eval(parse("sqrt(4)+abs(x2)"), b) == doctest::Approx(3.5).epsilon(1e-15));
  CHECK(eval(parse("exp(ln(2.5))"), b) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(eval(parse("sin(x1)^2+cos(x1)^2"), b) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(eval(parse("1.5e-3*2E2"), {}) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(eval(parse("tan(0)"), {}) == 0.0);
}

TEST_CASE("syntax errors report the offset") {
  try {
    (void)parse("x2 +");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ErrorKind::Syntax);
    CHECK(e.offset() == 4);
  }
  CHECK_THROWS_AS((void)parse("(x1"), ParseError);
  CHECK_THROWS_AS((void)parse("x1 x2"), ParseError);
  CHECK_THROWS_AS((void)parse(""), ParseError);
  CHECK_THROWS_AS((void)parse("sin()"), ParseError);
}

TEST_CASE("evaluation errors") {
  auto kind_of = [](const char* text, const Bindings& b) {
    try {
      (void)eval(parse(text), b);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Config;
  };
  CHECK(kind_of("foo(1)", {}) == ErrorKind::UnknownFunction);
  CHECK(kind_of("x3+1", {{"x1", 0.0}}) == ErrorKind::UnboundVariable);
  CHECK(kind_of("sqrt(-1)", {}) == ErrorKind::MathDomain);
  CHECK(kind_of("ln(0)", {}) == ErrorKind::MathDomain);
  CHECK(kind_of("1/x", {{"x", 0.0}}) == ErrorKind::MathDomain);
}

TEST_CASE("printing round-trips") {
  for (const char* text : {"-x^2", "2^3^2", "(x1-x2)-(x1+1)", "x1/(x2*x1)", "-(-x1)",
                           "(-x1)^2", "2*x1+2*x2*(sqrt(x1^2+x2^2)-1)", "a-(b-c)", "x^(y^z)",
                           "(x^y)^z", "1e-300*x"}) {
    const Expr e = parse(text);
    CHECK_MESSAGE(structurally_equal(e, parse(to_string(e))), text);
  }
  CHECK_FALSE(structurally_equal(parse("x1+x2"), parse("x2+x1")));
}

TEST_CASE("variables and finite differences") {
  const Expr e = parse("x1^3*y+sin(eps)");
  CHECK(variables(e) == std::set<std::string>{"eps", "x1", "y"});
  const Bindings b{{"x1", 1.2}, {"y", 0.7}, {"eps", 0.1}};
  CHECK(diff_fd(e, "x1", b) == doctest::Approx(3 * 1.44 * 0.7).epsilon(1e-9));
  CHECK(diff_fd(e, "eps", b) == doctest::Approx(std::cos(0.1)).epsilon(1e-9));
  CHECK_THROWS_AS((void)diff_fd(e, "x1", b, 0.0), Error);
  CHECK(parse("x1").is_variable("x1"));
  CHECK_FALSE(parse("x1+0").is_variable("x1"));
}

TEST_CASE("compiled evaluation agrees with the tree walker") {
  const std::vector<std::string> slots{"x1", "x2"};
  for (const char* text : {"x1^2-x2", "-x1^2", "2^x2^2", "sqrt(abs(x1))/(1+x2^2)",
                           "exp(-x1)*cos(x2)-ln(2+x1)"}) {
    const Expr e = parse(text);
    const Compiled c(e, slots);
    for (double a : {-0.7, 0.0, 1.3})
      for (double b : {-2.0, 0.5}) {
        const double vals[] = {a, b};
        CHECK(c(vals) == eval(e, {{"x1", a}, {"x2", b}}));
      }
  }
  CHECK_THROWS_AS(Compiled(parse("x1+z"), slots), Error);
}
