#pragma once

// First-order optimality diagnostics for min f(x) s.t. h(x) in K:
//   stationarity      ||grad f(x) + Dh(x)^T lambda||
//   feasibility       dist(h(x), K)
//   complementarity   |<h(x), lambda>|
//   dual feasibility  dist(lambda, K polar) = ||P_K(lambda)||
// plus two constraint-qualification checks that predict whether bounded
// multipliers can exist at the point.

#include <cmath>
#include <cstdint>
#include <string>

#include "conekit/problem.hpp"

namespace conekit {

struct KktReport {
  double stationarity = 0.0;
  double feasibility = 0.0;
  double complementarity = 0.0;
  double dual_feasibility = 0.0;
  double tol = 0.0;        // requested tolerance
  double threshold = 0.0;  // tol * (1 + ||grad f(x)||), the effective bound
  bool pass = false;
};

KktReport kkt_residuals(const Problem& p, const Vec& x, const Vec& lambda, double tol = 1e-6);

struct RegularityReport {
  std::string mode;  // "licq" or "conic"
  double min_singular_value = std::nan("");  // licq mode
  double certificate_value = std::nan("");   // conic mode
  bool verdict = false;
  std::string note;
};

// Smallest singular value of the constraint jacobian, via the spectrum of
// J J^T. Only meaningful for pure equality constraints; throws
// std::invalid_argument for any other cone and points the caller at
// conic_regularity_check. Verdict: sigma_min > tol * sigma_max.
RegularityReport licq_check(const Problem& p, const Vec& x, double tol = 1e-8);

// HEURISTIC check of the conic regularity implication
//   Dh(x)^T a = 0, <h(x), a> = 0, a in K polar  =>  a = 0.
// Minimizes g(a) = ||Dh(x)^T a||^2 + <h(x), a>^2 over unit-norm a in K polar
// by multistart projected gradient descent. The certificate is the smallest
// value found; a positive verdict is evidence, not proof.
RegularityReport conic_regularity_check(const Problem& p, const Vec& x, int multistarts = 50,
                                        uint64_t seed = 0);

}  // namespace conekit
