#include <cmath>
#include <functional>
#include <string>

#include "doctest.h"
#include "essspec/expr.hpp"
#include "support.hpp"

using namespace essspec;
using testing_support::rng;
using testing_support::uniform;

namespace {

complex ev(const std::string& s, double x = 0.0, const ParamMap& p = {}) { return parse_expr(s).eval(x, p); }

}  // namespace

TEST_CASE("expr: spot values") {
  CHECK(ev("2+3*4") == complex{14.0});
  CHECK(ev("-x^2", 3.0) == complex{-9.0});
  CHECK(std::abs(ev("5/(2*0.98)") - 2.5510204) <= 1e-6);
  CHECK(ev("exp(-x^2)", 0.0) == complex{1.0});
  CHECK(ev("i*x", 2.0) == complex{0.0, 2.0});
  CHECK(std::abs(ev("c0 - 17/21", 0.0, {{"c0", 1.15}}) - 0.3404762) <= 1e-6);
  CHECK(ev("i^2") == complex{-1.0});
  CHECK(ev("2^3^2") == complex{512.0});
  CHECK(ev("sqrt(-4)") == complex{0.0, 2.0});
  CHECK(ev("abs(3-4*i)") == complex{5.0});
  CHECK(std::abs(ev("cos(pi)") + 1.0) <= 1e-15);
  CHECK(ev("1.5e2") == complex{150.0});
  CHECK(ev("tanh(0)") == complex{0.0});
}

TEST_CASE("expr: precedence matrix over all operator pairs") {
  const std::string ops = "+-*/^";
  auto prec = [](char op) { return op == '^' ? 3 : (op == '*' || op == '/') ? 2 : 1; };
  auto apply = [](char op, double a, double b) {
    switch (op) {
      case '+': return a + b;
      case '-': return a - b;
      case '*': return a * b;
      case '/': return a / b;
      default: return std::pow(a, b);
    }
  };
  const double a = 2.0, b = 3.0, c = 1.5;
  for (char o1 : ops) {
    for (char o2 : ops) {
      const std::string src = "2" + std::string(1, o1) + "3" + std::string(1, o2) + "1.5";
      const bool right_first = prec(o2) > prec(o1) || (o1 == '^' && o2 == '^');
      const double want = right_first ? apply(o1, a, apply(o2, b, c)) : apply(o2, apply(o1, a, b), c);
      CAPTURE(src);
      CHECK(std::abs(ev(src) - want) <= 1e-12 * std::abs(want));
    }
    // Unary minus applied to the whole left operand unless the operator is ^.
    const std::string src = "-2" + std::string(1, o1) + "3";
    const double want = o1 == '^' ? -apply(o1, a, b) : apply(o1, -a, b);
    CAPTURE(src);
    CHECK(std::abs(ev(src) - want) <= 1e-12 * std::abs(want));
  }
}

TEST_CASE("expr: syntax errors carry offset and expected tokens") {
  try {
    parse_expr("2+");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 2);
    CHECK_FALSE(e.expected().empty());
  }
  try {
    parse_expr("(1+2");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
  CHECK_THROWS_AS(parse_expr("foo(1)"), ParseError);
  CHECK_THROWS_AS(parse_expr(""), ParseError);
  CHECK_THROWS_AS(parse_expr("   "), ParseError);
  CHECK_THROWS_AS(parse_expr("2 3"), ParseError);
}

TEST_CASE("expr: evaluation errors") {
  const Expr e = parse_expr("alpha*x");  // unknown identifiers parse
  CHECK_THROWS_AS(e.eval(1.0), EvalError);
  CHECK(e.eval(2.0, {{"alpha", 3.0}}) == complex{6.0});
  CHECK_THROWS_AS(ev("1/0"), EvalError);
  CHECK_THROWS_AS(ev("1/(x-x)", 1.0), EvalError);
  CHECK_THROWS_AS(ev("0^(-1)"), EvalError);
}

TEST_CASE("expr: free parameters and x dependence") {
  const Expr e = parse_expr("a*exp(-x^2) + b/pi + i");
  CHECK(e.free_params() == std::set<std::string>{"a", "b"});
  CHECK(e.depends_on_x());
  CHECK_FALSE(parse_expr("9*eta/(2*delta)").depends_on_x());
}

namespace {

Expr random_expr(std::mt19937_64& g, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 4 : 9);
  switch (pick(g)) {
    case 0: {
      const double vals[] = {0.5, 2.0, 3.0, 1e-3, 17.0 / 21.0, 0.1, 1.25e2, -2.5, 7.0};
      return Expr::number(vals[std::uniform_int_distribution<int>(0, 8)(g)]);
    }
    case 1: return Expr::variable();
    case 2: return Expr::imag_unit();
    case 3: return Expr::pi();
    case 4: return Expr::param("c0");
    case 5: return Expr::neg(random_expr(g, depth - 1));
    case 6: {
      const Func fs[] = {Func::Exp, Func::Sin, Func::Cos, Func::Tan, Func::Tanh, Func::Sqrt, Func::Abs};
      return Expr::call(fs[std::uniform_int_distribution<int>(0, 6)(g)], random_expr(g, depth - 1));
    }
    case 7: {
      // Small integer or half-integer exponents keep values finite.
      const double ex[] = {2.0, 3.0, 0.5, -1.0};
      return Expr::binary(Expr::Kind::Pow, random_expr(g, depth - 1),
                          Expr::number(ex[std::uniform_int_distribution<int>(0, 3)(g)]));
    }
    default: {
      const Expr::Kind ks[] = {Expr::Kind::Add, Expr::Kind::Sub, Expr::Kind::Mul, Expr::Kind::Div,
                               Expr::Kind::Pow};
      const Expr::Kind k = ks[std::uniform_int_distribution<int>(0, 3)(g)];
      return Expr::binary(k, random_expr(g, depth - 1), random_expr(g, depth - 1));
    }
  }
}

}  // namespace

TEST_CASE("expr: print-then-reparse evaluates identically") {
  auto g = rng(20240611);
  const ParamMap params{{"c0", 1.15}};
  int compared = 0;
  for (int n = 0; n < 200; ++n) {
    const Expr e = random_expr(g, 4);
    const std::string text = e.to_string();
    CAPTURE(text);
    const Expr back = parse_expr(text);
    CHECK(back.to_string() == text);
    for (int k = 0; k < 1000; ++k) {
      const double x = uniform(g, -5.0, 5.0);
      complex v1, v2;
      bool t1 = false, t2 = false;
      try {
        v1 = e.eval(x, params);
      } catch (const EvalError&) {
        t1 = true;
      }
      try {
        v2 = back.eval(x, params);
      } catch (const EvalError&) {
        t2 = true;
      }
      REQUIRE(t1 == t2);
      if (t1 || !std::isfinite(std::abs(v1))) continue;
      ++compared;
      REQUIRE(std::abs(v1 - v2) <= 1e-14 * std::max(1.0, std::abs(v1)));
    }
  }
  CHECK(compared > 100000);
}
