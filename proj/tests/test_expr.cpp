#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "conekit/expr.hpp"
#include "conekit/expr_gen.hpp"
#include "conekit/rng.hpp"

using namespace conekit;

namespace {

double ev(const std::string& s, const Vec& x = {}) {
  return eval(parse(s, static_cast<int>(x.size())), x);
}

// Independent central-difference oracle.
Vec fd_grad(const Expr& e, const Vec& x) {
  Vec g(x.size());
  Vec w = x;
  for (size_t i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * (1.0 + std::fabs(x[i]));
    w[i] = x[i] + h;
    const double fp = eval(e, w);
    w[i] = x[i] - h;
    const double fm = eval(e, w);
    w[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

size_t parse_offset(const std::string& s, int n) {
  try {
    parse(s, n);
  } catch (const ParseError& e) {
    return e.offset;
  }
  FAIL("expected ParseError for: ", s);
  return static_cast<size_t>(-1);
}

}  // namespace

TEST_CASE("arithmetic precedence and associativity") {
  CHECK(ev("1 + 2*3^2") == 19.0);
  CHECK(ev("2*3 + 4") == 10.0);
  CHECK(ev("2^3^2") == 512.0);  // right-associative
  CHECK(ev("-2^2") == -4.0);    // unary minus binds looser than ^
  CHECK(ev("(-2)^2") == 4.0);
  CHECK(ev("2^-1") == 0.5);
  CHECK(ev("1 - -2") == 3.0);
  CHECK(ev("10/4") == 2.5);
  CHECK(ev("1.5e2") == 150.0);
  CHECK(ev("2e-2") == 0.02);
  CHECK(ev("6 - 2 - 3") == 1.0);  // left-associative
  CHECK(ev("12/3/2") == 2.0);
}

TEST_CASE("variables") {
  CHECK(ev("x1 + 2*x2", {1.0, 3.0}) == 7.0);
  CHECK(ev("-x1^2", {3.0}) == -9.0);

  Vec x(12, 0.0);
  x[11] = 42.0;
  CHECK(ev("x12", x) == 42.0);

  CHECK_THROWS_AS(parse("x0", 2), ParseError);
  CHECK_THROWS_AS(parse("x3", 2), ParseError);
  CHECK_THROWS_AS(eval(parse("x1", 2), Vec{5.0}), EvalError);  // dimension mismatch
}

TEST_CASE("parse errors carry byte offsets") {
  CHECK(parse_offset("x1 + ", 2) == 5);
  CHECK(parse_offset("sin x1", 1) == 4);
  CHECK(parse_offset("foo(x1)", 1) == 0);
  CHECK(parse_offset("abs(x1)", 1) == 0);  // nonsmooth primitives are rejected
  CHECK(parse_offset("x1 @ x2", 2) == 3);
  CHECK(parse_offset("(x1 + 1", 1) == 7);
  CHECK(parse_offset("x1 x2", 2) == 3);  // trailing input
  CHECK(parse_offset("", 1) == 0);
  CHECK(parse_offset(".5", 1) == 0);
  CHECK(parse_offset("x0", 2) == 0);
}

TEST_CASE("domain errors raise EvalError") {
  CHECK_THROWS_AS(ev("log(x1)", {0.0}), EvalError);
  CHECK_THROWS_AS(ev("log(x1)", {-1.0}), EvalError);
  CHECK_THROWS_AS(ev("sqrt(x1)", {-1e-12}), EvalError);
  CHECK(ev("sqrt(x1)", {0.0}) == 0.0);
  CHECK_THROWS_AS(grad(parse("sqrt(x1)", 1), Vec{0.0}), EvalError);  // not differentiable
  CHECK_THROWS_AS(ev("1/x1", {0.0}), EvalError);
  CHECK_THROWS_AS(ev("x1^0.5", {-2.0}), EvalError);
  CHECK(ev("x1^0.5", {4.0}) == 2.0);
  CHECK(ev("x1^2", {-3.0}) == 9.0);  // integer exponents allow negative bases
  CHECK(ev("x1^3", {-2.0}) == -8.0);
}

TEST_CASE("dual product rule is evaluated in fixed operand order") {
  const Dual a{1.3, 0.7};
  const Dual b{-2.1, 0.4};
  const Dual c = a * b;
  CHECK(c.val == 1.3 * -2.1);
  CHECK(c.der == 0.7 * -2.1 + 1.3 * 0.4);
}

TEST_CASE("gradients: exact cases") {
  const Vec g = grad(parse("sin(x1)*x2", 2), Vec{0.0, 3.0});
  CHECK(g[0] == 3.0);  // cos(0)*3
  CHECK(g[1] == 0.0);  // sin(0)

  const Vec g2 = grad(parse("x1^3", 1), Vec{2.0});
  CHECK(g2[0] == 12.0);

  const Vec g3 = grad(parse("x1^2 + x2^2 - 2", 2), Vec{-1.0, -1.0});
  CHECK(g3[0] == -2.0);
  CHECK(g3[1] == -2.0);
}

TEST_CASE("gradients match finite differences") {
  struct Case {
    std::string text;
    Vec x;
  };
  const std::vector<Case> cases = {
      {"exp(x1)*sin(x2) + x1^3/(1 + x2^2)", {0.3, -1.2}},
      {"log(1.5 + x1^2)*sqrt(2.5 + x2)", {0.7, 1.1}},
      {"x1*x2*x3 - 2*x1^2 + x3^5", {0.5, -0.3, 0.9}},
      {"cos(x1^2) - x2/(2 + sin(x1))", {1.4, 0.6}},
  };
  for (const Case& c : cases) {
    CAPTURE(c.text);
    const Expr e = parse(c.text, static_cast<int>(c.x.size()));
    const Vec g = grad(e, c.x);
    const Vec f = fd_grad(e, c.x);
    REQUIRE(g.size() == f.size());
    for (size_t i = 0; i < g.size(); ++i)
      CHECK(std::fabs(g[i] - f[i]) <= 1e-6 * (1.0 + std::fabs(g[i])));
  }
}

TEST_CASE("jacobian stacks gradients row by row") {
  std::vector<Expr> es;
  es.push_back(parse("x1*x2", 2));
  es.push_back(parse("x1 - x2^2", 2));
  const Vec x{1.5, -0.5};
  const Mat j = jacobian(es, x);
  REQUIRE(j.rows == 2);
  REQUIRE(j.cols == 2);
  const Vec g0 = grad(es[0], x);
  const Vec g1 = grad(es[1], x);
  CHECK(j(0, 0) == g0[0]);
  CHECK(j(0, 1) == g0[1]);
  CHECK(j(1, 0) == g1[0]);
  CHECK(j(1, 1) == g1[1]);
}

TEST_CASE("print round-trips structurally") {
  const std::vector<std::string> cases = {
      "x1 + 2*x2", "-x1^2", "sin(x1)*cos(x2)", "2^3^2", "x1/(1 + x2^2)",
      "sqrt(1.5 + x1^2) - log(2.5 + x2^2)",
  };
  for (const std::string& s : cases) {
    CAPTURE(s);
    const Expr e = parse(s, 2);
    const std::string printed = print(e);
    const Expr r = parse(printed, 2);
    CHECK(structurally_equal(e, r));
    CHECK(print(r) == printed);
  }
}

TEST_CASE("expressions copy deeply") {
  const Expr a = parse("x1^2 + sin(x2)", 2);
  const Expr b = a;  // copy
  CHECK(structurally_equal(a, b));
  const Vec x{0.5, 0.25};
  CHECK(eval(a, x) == eval(b, x));
  Expr c;
  c = a;
  CHECK(eval(c, x) == eval(a, x));
}

TEST_CASE("generated expressions parse and differentiate cleanly") {
  Rng rng(7);
  int evaluated = 0;
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + rng.index(3);
    const std::string text = random_expression(rng, n);
    CAPTURE(text);
    const Expr e = parse(text, n);  // generated text must always parse
    Vec x(static_cast<size_t>(n));
    for (double& xi : x) xi = rng.uniform(-2.0, 2.0);
    try {
      const double f = eval(e, x);
      const Vec g = grad(e, x);
      CHECK(std::isfinite(f));
      for (double gi : g) CHECK(std::isfinite(gi));
      ++evaluated;
    } catch (const EvalError&) {
      // Domain errors (sqrt/log of a negative, division by zero) are a
      // legitimate outcome for random inputs; they must throw, not yield NaN.
    }
  }
  CHECK(evaluated >= 100);  // most samples should be in-domain
}
