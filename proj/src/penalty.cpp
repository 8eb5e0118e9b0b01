#include "conekit/penalty.hpp"

#include <algorithm>
#include <cmath>

namespace conekit {

namespace {

constexpr double kArmijoC = 1e-4;
constexpr double kMinStep = 1e-18;
// Replay stops extending the penalty schedule once the constraint residual is
// this small: beyond it, k * (float noise in h) would dominate the multiplier.
constexpr double kFeasibilityFloor = 1e-10;

double inner_tol_for(const SolverConfig& cfg, double k) {
  return std::max(cfg.inner_tol, 1e-6 / std::sqrt(k));
}

double residual(const Vec& x, const Vec& g, const Projector& projector) {
  if (!projector) return norm2(g);
  Vec trial = x;
  axpy(-1.0, g, trial);
  return norm2(sub(x, projector(trial)));
}

IterateRecord make_record(const Problem& p, double k, const Vec& x, const Vec& lambda,
                          double phi, double stationarity, int inner_iters) {
  IterateRecord r;
  r.k = k;
  r.x = x;
  r.lambda = lambda;
  r.phi = phi;
  r.stationarity = stationarity;
  Vec h = p.h_value(x);
  r.feasibility = dist_to_cone(p.cone, h);
  r.complementarity = std::fabs(dot(h, lambda));
  r.dual_feasibility = norm2(project(p.cone, lambda));
  r.inner_iters = inner_iters;
  return r;
}

}  // namespace

PhiValue phi_eval_grad(const Problem& p, const Vec& anchor, double k, const Vec& x,
                       double prox_weight) {
  Vec h = p.h_value(x);
  Vec d = sub(x, anchor);

  PhiValue out;
  out.value = p.f_value(x) + 0.5 * prox_weight * dot(d, d) + 0.5 * k * penalty_value(p.cone, h);

  out.grad = p.f_grad(x);
  axpy(prox_weight, d, out.grad);
  Vec pen = penalty_grad_chain(p.cone, h, p.h_jacobian(x));
  axpy(0.5 * k, pen, out.grad);
  return out;
}

InnerResult solve_inner(const ObjectiveFn& fn, Vec x0, double tol, int max_iter,
                        const Projector& projector, int memory) {
  InnerResult res;
  res.x = projector ? projector(x0) : std::move(x0);

  PhiValue cur = fn(res.x);
  double step = 1.0 / std::max(1.0, norm2(cur.grad));
  Vec prev_x, prev_g;
  std::vector<double> recent{cur.value};  // acceptance references, newest last

  for (res.iters = 0; res.iters < max_iter; ++res.iters) {
    res.achieved = residual(res.x, cur.grad, projector);
    if (res.achieved <= tol) {
      res.converged = true;
      return res;
    }

    if (!prev_x.empty()) {
      // Barzilai-Borwein trial step <s,y>/<y,y> with safeguards.
      Vec s = sub(res.x, prev_x);
      Vec y = sub(cur.grad, prev_g);
      double sy = dot(s, y);
      double yy = dot(y, y);
      if (sy > 0.0 && yy > 0.0 && std::isfinite(sy / yy)) step = sy / yy;
      step = std::clamp(step, 1e-12, 1e12);
    }

    // Armijo backtracking by halving, tested against the worst recent value.
    const double reference = *std::max_element(recent.begin(), recent.end());
    double t = step;
    bool accepted = false;
    Vec trial;
    PhiValue trial_val;
    while (t >= kMinStep) {
      trial = res.x;
      axpy(-t, cur.grad, trial);
      if (projector) trial = projector(trial);
      Vec d = sub(trial, res.x);
      if (norm2(d) == 0.0) {
        // The step underflowed below float resolution; a zero move would
        // satisfy Armijo vacuously, so treat it as a rejection.
        t *= 0.5;
        continue;
      }
      double gd = dot(cur.grad, d);
      bool ok = true;
      try {
        trial_val = fn(trial);
      } catch (const EvalError&) {
        ok = false;  // out of the expression domain; retreat
      }
      if (ok && trial_val.value <= reference + kArmijoC * gd) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      // Decrease is below float resolution (or the domain wall is flush
      // against the iterate); report the point reached.
      res.line_search_failed = true;
      return res;
    }

    prev_x = res.x;
    prev_g = cur.grad;
    res.x = trial;
    cur = trial_val;
    recent.push_back(cur.value);
    if (static_cast<int>(recent.size()) > std::max(1, memory)) recent.erase(recent.begin());
  }
  res.achieved = residual(res.x, cur.grad, projector);
  res.converged = res.achieved <= tol;
  return res;
}

Vec multiplier_estimate(const Problem& p, const Vec& x, double k) {
  return scaled(project_polar(p.cone, p.h_value(x)), k);
}

bool multiplier_divergence(const std::vector<double>& lambda_norms, double rho) {
  for (size_t j = 0; j + 3 < lambda_norms.size(); ++j) {
    if (lambda_norms[j] <= 1e-6) continue;  // ramp-up from (near) zero
    bool monotone = lambda_norms[j + 1] > lambda_norms[j] &&
                    lambda_norms[j + 2] > lambda_norms[j + 1] &&
                    lambda_norms[j + 3] > lambda_norms[j + 2];
    if (monotone && lambda_norms[j + 3] > rho * lambda_norms[j]) return true;
  }
  return false;
}

ReplayResult replay(const Problem& p, const Vec& xbar, const SolverConfig& cfg) {
  p.validate();
  if (static_cast<int>(xbar.size()) != p.n)
    throw std::invalid_argument("replay: xbar has wrong dimension");
  double infeas = dist_to_cone(p.cone, p.h_value(xbar));
  if (infeas > 1e-8)
    throw std::invalid_argument("replay: xbar is infeasible (dist to cone " +
                                std::to_string(infeas) + " > 1e-8)");

  const double delta = cfg.delta;
  Projector ball = [&xbar, delta](const Vec& v) {
    Vec d = sub(v, xbar);
    double nd = norm2(d);
    if (nd <= delta) return v;
    Vec r = xbar;
    axpy(delta / nd, d, r);
    return r;
  };

  ReplayResult out;
  Vec x = xbar;
  double k = cfg.k0;
  for (int j = 0; j < cfg.max_outer; ++j, k *= cfg.rho) {
    auto fn = [&](const Vec& v) { return phi_eval_grad(p, xbar, k, v, 1.0); };
    // Warm start from the previous iterate unless xbar is better for this k;
    // monotone descent then keeps phi_k(x^k) <= phi_k(xbar) = f(xbar).
    Vec start = x;
    if (fn(x).value > fn(xbar).value) start = xbar;

    InnerResult inner = solve_inner(fn, start, inner_tol_for(cfg, k), cfg.inner_max_iter, ball);
    x = inner.x;
    Vec lambda = multiplier_estimate(p, x, k);
    out.trace.push_back(
        make_record(p, k, x, lambda, fn(x).value, inner.achieved, inner.iters));

    if (norm2(sub(x, xbar)) >= delta * (1.0 - 1e-6)) out.interior_ok = false;

    if (out.trace.back().feasibility <= kFeasibilityFloor && j + 1 < cfg.max_outer) {
      out.schedule_truncated = true;
      out.message = "schedule stopped early: constraint residual at the float noise floor";
      break;
    }
  }

  std::vector<double> norms;
  norms.reserve(out.trace.size());
  for (const auto& r : out.trace) norms.push_back(norm2(r.lambda));
  out.multiplier_divergence = multiplier_divergence(norms, cfg.rho);
  if (out.multiplier_divergence) {
    if (!out.message.empty()) out.message += "; ";
    out.message +=
        "multiplier norms grow unboundedly: no Lagrange multiplier appears to exist here";
  }
  return out;
}

SolveResult solve(const Problem& p, const Vec& x0, const SolverConfig& cfg) {
  p.validate();
  if (static_cast<int>(x0.size()) != p.n)
    throw std::invalid_argument("solve: x0 has wrong dimension");

  SolveResult out;
  Vec x = x0;
  Vec anchor = x0;
  std::vector<double> lambda_norms;

  double k = cfg.k0;
  for (int j = 0; j < cfg.max_outer; ++j) {
    auto fn = [&](const Vec& v) { return phi_eval_grad(p, anchor, k, v, cfg.prox_weight); };
    // Nonmonotone acceptance (memory 10): the subproblem conditioning grows
    // with k, and Barzilai-Borwein needs the slack to traverse stiff valleys.
    InnerResult inner =
        solve_inner(fn, x, inner_tol_for(cfg, k), cfg.inner_max_iter, nullptr, 10);
    x = inner.x;
    Vec lambda = multiplier_estimate(p, x, k);
    out.trace.push_back(
        make_record(p, k, x, lambda, fn(x).value, inner.achieved, inner.iters));
    lambda_norms.push_back(norm2(lambda));

    out.x = x;
    out.lambda = lambda;
    out.kkt = kkt_residuals(p, x, lambda, cfg.kkt_tol);
    if (out.kkt.pass) {
      out.status = SolveStatus::Ok;
      out.message = "KKT residuals within tolerance";
      return out;
    }
    if (multiplier_divergence(lambda_norms, cfg.rho)) {
      out.status = SolveStatus::RegularitySuspect;
      out.message =
          "multiplier norms grow by more than rho across consecutive outer steps; "
          "suspected constraint-qualification failure";
      return out;
    }
    // Raise the penalty only while feasibility is the binding residual. Once
    // it sits safely below the KKT threshold, larger k no longer helps any
    // residual; it only coarsens the gradient's float granularity
    // (~ k * ulp(x)) and amplifies noise in the multiplier estimate. Holding
    // k runs the step as a pure anchored proximal iteration, which bleeds off
    // the prox-term bias that may still hold stationarity above tolerance;
    // growth resumes if feasibility degrades again.
    if (out.trace.back().feasibility >
        std::max(0.1 * out.kkt.threshold, kFeasibilityFloor))
      k *= cfg.rho;
    anchor = x;
  }
  out.status = SolveStatus::NoConverge;
  out.message = "outer iteration budget exhausted before the KKT test passed";
  return out;
}

}  // namespace conekit
