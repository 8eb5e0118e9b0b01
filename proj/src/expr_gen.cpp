#include "conekit/expr_gen.hpp"

#include <cstdio>

namespace conekit {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string leaf(Rng& rng, int n) {
  if (rng.uniform01() < 0.4) return fmt(rng.uniform(-2.0, 2.0));
  return "x" + std::to_string(rng.index(n) + 1);
}

std::string gen(Rng& rng, int n, int depth) {
  if (depth <= 0) return leaf(rng, n);
  switch (rng.index(9)) {
    case 0: return "(" + gen(rng, n, depth - 1) + " + " + gen(rng, n, depth - 1) + ")";
    case 1: return "(" + gen(rng, n, depth - 1) + " - " + gen(rng, n, depth - 1) + ")";
    case 2: return "(" + gen(rng, n, depth - 1) + " * " + gen(rng, n, depth - 1) + ")";
    // denominator bounded away from zero
    case 3:
      return "(" + gen(rng, n, depth - 1) + " / (2 + " + gen(rng, n, depth - 1) + "^2))";
    case 4: return "sin(" + gen(rng, n, depth - 1) + ")";
    case 5: return "cos(" + gen(rng, n, depth - 1) + ")";
    // exp of a bounded argument only
    case 6: return "exp(sin(" + gen(rng, n, depth - 1) + "))";
    case 7: return "log(1.5 + " + gen(rng, n, depth - 1) + "^2)";
    default: return "sqrt(1.5 + " + gen(rng, n, depth - 1) + "^2)";
  }
}

}  // namespace

std::string random_expression(Rng& rng, int n) {
  int depth = 1 + rng.index(3);
  return gen(rng, n, depth);
}

}  // namespace conekit
