#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <optional>
#include <random>

#include "estokes/expr.hpp"

using namespace estokes;

namespace {

double ev(const std::string& s, double x = 0.0, double y = 0.0) {
  return evaluate(parse(s), x, y);
}

}  // namespace

TEST_CASE("basic arithmetic and precedence") {
  CHECK(ev("1+2*3") == 7.0);
  CHECK(ev("2*3+4*5") == 26.0);
  CHECK(ev("(1+2)*3") == 9.0);
  CHECK(ev("1-2-3") == -4.0);   // left associative
  CHECK(ev("12/3/2") == 2.0);   // left associative
  CHECK(ev("2^3^2") == 512.0);  // right associative
  CHECK(ev("-2^2") == -4.0);    // ^ binds tighter than unary minus
  CHECK(ev("(-2)^2") == 4.0);
  CHECK(ev("2^-1") == 0.5);     // exponent may start with '-'
  CHECK(ev("--3") == 3.0);
  CHECK(ev("7/2") == 3.5);
}

TEST_CASE("literals") {
  CHECK(ev("0.5") == 0.5);
  CHECK(ev("1e3") == 1000.0);
  CHECK(ev("2.5e-2") == 0.025);
  CHECK(ev("  1 + 2 ") == 3.0);
}

TEST_CASE("variables and pi") {
  CHECK(ev("x", 3.0, 0.0) == 3.0);
  CHECK(ev("y", 0.0, -2.0) == -2.0);
  CHECK(ev("x^2", 3.0, 0.0) == 9.0);
  CHECK(ev("pi") == doctest::Approx(3.14159265358979).epsilon(1e-14));
  CHECK(ev("sin(pi/2)") == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ev("cos(pi)") == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(ev("exp(0)") == 1.0);
  CHECK(ev("sqrt(4)") == 2.0);
}

TEST_CASE("formulas from the problem data") {
  CHECK(ev("x*(x-1)", 0.3, 0.0) == doctest::Approx(-0.21).epsilon(1e-15));
  CHECK(ev("2*x+2*y-2", 0.5, 0.5) == 0.0);
  CHECK(ev("pi*sin(pi*x)*cos(pi*y)", 0.5, 0.0) ==
        doctest::Approx(3.14159265358979).epsilon(1e-14));
}

TEST_CASE("parse errors carry positions") {
  for (const std::string& bad :
       {"", "1+", "(1+2", "1+2)", "sin", "sin x", "*3", "1..2", "2^", "()"}) {
    CHECK_THROWS_AS(parse(bad), ParseError);
  }
  try {
    parse("1+2)");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position == 3);
    CHECK(std::string(e.what()).find("position") != std::string::npos);
  }
  try {
    parse("foo(2)");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("foo") != std::string::npos);
  }
  try {
    parse("1 2");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("trailing") != std::string::npos);
  }
}

TEST_CASE("evaluation errors name the offending subexpression") {
  try {
    ev("1/(x-1)", 1.0, 0.0);
    FAIL("expected EvalError");
  } catch (const EvalError& e) {
    CHECK(e.subexpression.find("x") != std::string::npos);
    CHECK(e.subexpression.find("1") != std::string::npos);
  }
  CHECK_THROWS_AS(ev("sqrt(0-1)"), EvalError);
  CHECK_THROWS_AS(ev("(0-2)^0.5"), EvalError);
  // Away from the singularity everything is fine.
  CHECK(ev("1/(x-1)", 3.0, 0.0) == 0.5);
}

TEST_CASE("print round-trips structurally") {
  for (const std::string& s :
       {"1+2*3", "-x^2+sin(pi*y)", "sqrt(x*x+y*y)", "2^-1", "x*(x-1)*exp(-y)"}) {
    Expr e = parse(s);
    Expr r = parse(print(e));
    CHECK(structurally_equal(e, r));
    CHECK(print(e) == print(r));
  }
  CHECK(structurally_equal(parse("1+x"), parse("1 + x")));
  CHECK_FALSE(structurally_equal(parse("1+x"), parse("x+1")));
}

TEST_CASE("randomized print/parse round-trip with bit-identical evaluation") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> lit(-2.0, 2.0);
  std::uniform_int_distribution<int> pick(0, 9);

  // Build a random expression as text via the same grammar the parser accepts.
  std::function<std::string(int)> gen = [&](int depth) -> std::string {
    if (depth <= 0 || pick(rng) < 2) {
      switch (pick(rng) % 4) {
        case 0: return "x";
        case 1: return "y";
        case 2: return "pi";
        default: {
          char buf[32];
          std::snprintf(buf, sizeof(buf), "%.6g", std::abs(lit(rng)));
          return buf;
        }
      }
    }
    switch (pick(rng)) {
      case 0: return "(" + gen(depth - 1) + "+" + gen(depth - 1) + ")";
      case 1: return "(" + gen(depth - 1) + "-" + gen(depth - 1) + ")";
      case 2: return "(" + gen(depth - 1) + "*" + gen(depth - 1) + ")";
      case 3: return "(" + gen(depth - 1) + "/" + gen(depth - 1) + ")";
      case 4: return "(" + gen(depth - 1) + "^2)";
      case 5: return "(-" + gen(depth - 1) + ")";
      case 6: return "sin(" + gen(depth - 1) + ")";
      case 7: return "cos(" + gen(depth - 1) + ")";
      case 8: return "exp(" + gen(depth - 1) + ")";
      default: return "sqrt(" + gen(depth - 1) + ")";
    }
  };

  std::uniform_real_distribution<double> coord(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    Expr e = parse(gen(4));
    Expr r = parse(print(e));
    REQUIRE(structurally_equal(e, r));
    const double x = coord(rng), y = coord(rng);
    std::optional<double> ve, vr;
    try {
      ve = evaluate(e, x, y);
    } catch (const EvalError&) {
    }
    try {
      vr = evaluate(r, x, y);
    } catch (const EvalError&) {
    }
    REQUIRE(ve.has_value() == vr.has_value());
    if (ve) {
      if (std::isnan(*ve)) {
        CHECK(std::isnan(*vr));
      } else {
        CHECK(*ve == *vr);  // bit-identical
      }
    }
  }
}
