#pragma once

// A conically constrained program: minimize f(x) subject to h(x) in K,
// with f and the components of h given as parsed expressions.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "conekit/cones.hpp"
#include "conekit/expr.hpp"
#include "conekit/linalg.hpp"

namespace conekit {

struct Problem {
  std::string name;
  int n = 0;                      // number of variables
  Expr objective;
  std::vector<Expr> constraints;  // one expression per embedded cone coordinate
  Cone cone = Cone::zero(1);
  std::optional<Vec> known_solution;
  std::optional<Vec> known_multiplier;
  std::optional<Vec> x0;
  std::optional<double> delta;

  int constraint_dim() const { return static_cast<int>(constraints.size()); }

  double f_value(const Vec& x) const { return eval(objective, x); }
  Vec f_grad(const Vec& x) const { return grad(objective, x); }

  Vec h_value(const Vec& x) const {
    Vec h(constraints.size());
    for (size_t i = 0; i < constraints.size(); ++i) h[i] = eval(constraints[i], x);
    return h;
  }

  Mat h_jacobian(const Vec& x) const { return jacobian(constraints, x); }

  void validate() const {
    if (n < 1) throw std::invalid_argument("problem: dimension must be >= 1");
    if (objective.empty()) throw std::invalid_argument("problem: missing objective");
    if (constraint_dim() != cone.dim())
      throw std::invalid_argument("problem: " + std::to_string(constraints.size()) +
                                  " constraint expressions but cone has dimension " +
                                  std::to_string(cone.dim()));
    auto check_point = [&](const std::optional<Vec>& v, const char* what, int want) {
      if (v && static_cast<int>(v->size()) != want)
        throw std::invalid_argument(std::string("problem: ") + what + " has dimension " +
                                    std::to_string(v->size()) + ", expected " +
                                    std::to_string(want));
    };
    check_point(known_solution, "known_solution", n);
    check_point(x0, "x0", n);
    check_point(known_multiplier, "known_multiplier", cone.dim());
    if (known_solution) {
      double d = dist_to_cone(cone, h_value(*known_solution));
      if (d > 1e-8)
        throw std::invalid_argument("problem: known_solution violates the cone constraint (dist " +
                                    std::to_string(d) + ")");
    }
  }
};

}  // namespace conekit
