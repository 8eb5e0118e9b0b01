#pragma once

// Quadratic-penalty outer loop with proximal regularization.
//
// For penalty weight k the smoothed subproblem is
//   phi_k(x) = f(x) + (w/2)||x - anchor||^2 + (k/2) ||P_polar(h(x))||^2,
// whose inner minimizers x^k yield multiplier estimates
//   lambda^k = k * P_polar(h(x^k)),
// dual-feasible by construction. Two drivers share the machinery:
//
//   replay(p, xbar, cfg): anchor fixed at a known local solution xbar,
//     prox weight 1, inner minimization over the ball ||x - xbar|| <= delta.
//     Traces the multiplier sequence converging to a Lagrange multiplier
//     (or diverging when no constraint qualification holds).
//
//   solve(p, x0, cfg): anchor re-centered at the previous outer iterate, no
//     ball; stops when the KKT residuals pass, the iteration budget runs
//     out, or the multiplier norms blow up (suspected regularity failure).

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "conekit/kkt.hpp"
#include "conekit/problem.hpp"

namespace conekit {

struct SolverConfig {
  double k0 = 1.0;            // first penalty weight
  double rho = 10.0;          // weight growth factor per outer step
  int max_outer = 20;         // schedule length
  double inner_tol = 1e-9;    // floor; step k uses max(inner_tol, 1e-6/sqrt(k))
  int inner_max_iter = 5000;
  double delta = 1.0;         // replay ball radius
  double prox_weight = 1.0;   // solve mode only; replay pins it to 1
  double kkt_tol = 1e-6;      // solve-mode stopping test
  uint64_t seed = 0;          // reserved for stochastic diagnostics
};

struct IterateRecord {
  double k = 0.0;
  Vec x;
  Vec lambda;
  double phi = 0.0;
  double stationarity = 0.0;      // inner residual achieved
  double feasibility = 0.0;       // dist(h(x), K)
  double complementarity = 0.0;   // |<h(x), lambda>|
  double dual_feasibility = 0.0;  // ||P_K(lambda)||
  int inner_iters = 0;
};

struct PhiValue {
  double value = 0.0;
  Vec grad;
};

// Value and gradient of phi_k at x (see header comment for the formula).
PhiValue phi_eval_grad(const Problem& p, const Vec& anchor, double k, const Vec& x,
                       double prox_weight = 1.0);

using ObjectiveFn = std::function<PhiValue(const Vec&)>;
using Projector = std::function<Vec(const Vec&)>;

struct InnerResult {
  Vec x;
  int iters = 0;
  double achieved = 0.0;  // final residual: ||grad|| or projected-gradient norm
  bool converged = false;
  bool line_search_failed = false;  // stopped at the numerical decrease floor
};

// Gradient descent with Armijo backtracking (c = 1e-4, halving) and a
// Barzilai-Borwein trial step after the first iteration. With a projector
// the step becomes projected gradient and the residual ||x - P(x - grad)||.
// Domain errors at trial points reject the step; backtracking below 1e-18
// returns the current iterate with line_search_failed set.
//
// memory > 1 switches the acceptance reference to the largest of the last
// `memory` accepted values (Grippo-Lampariello-Lucidi): Barzilai-Borwein
// steps then survive the transient increases they need on badly conditioned
// objectives. memory = 1 is the strictly monotone test.
InnerResult solve_inner(const ObjectiveFn& fn, Vec x0, double tol, int max_iter,
                        const Projector& projector = nullptr, int memory = 1);

// lambda^k = k * P_polar(h(x)).
Vec multiplier_estimate(const Problem& p, const Vec& x, double k);

struct ReplayResult {
  std::vector<IterateRecord> trace;
  bool interior_ok = true;             // every iterate strictly inside the ball
  bool multiplier_divergence = false;  // unbounded-multiplier diagnostic
  bool schedule_truncated = false;     // stopped early at the feasibility floor
  std::string message;
};

// Requires dist(h(xbar), K) <= 1e-8; throws std::invalid_argument otherwise.
ReplayResult replay(const Problem& p, const Vec& xbar, const SolverConfig& cfg);

enum class SolveStatus { Ok, NoConverge, RegularitySuspect };

struct SolveResult {
  SolveStatus status = SolveStatus::NoConverge;
  Vec x;
  Vec lambda;
  KktReport kkt;
  std::vector<IterateRecord> trace;
  std::string message;
};

SolveResult solve(const Problem& p, const Vec& x0, const SolverConfig& cfg);

// True when ||lambda|| grows monotonically by more than a factor rho across a
// window of three consecutive outer steps (skipping the ramp-up from zero).
bool multiplier_divergence(const std::vector<double>& lambda_norms, double rho);

}  // namespace conekit
