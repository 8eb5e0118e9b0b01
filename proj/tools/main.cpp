// conekit: solve and diagnose conically constrained programs.
//
// Exit codes, uniform across subcommands:
//   0  success / all checks passed
//   1  usage or input error
//   2  failure (no convergence, a failed check, a failed battery)
//   3  regularity suspect (diverging multiplier trail or a failed
//      regularity verdict at an otherwise valid point)

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "conekit/batteries.hpp"
#include "conekit/kkt.hpp"
#include "conekit/penalty.hpp"
#include "conekit/problem_io.hpp"

namespace {

using namespace conekit;

std::string join_numbers(const Vec& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_double(v[i]);
  }
  return s;
}

void print_kkt_line(const KktReport& r) {
  std::cout << "kkt: stationarity " << format_double(r.stationarity) << ", feasibility "
            << format_double(r.feasibility) << ", complementarity "
            << format_double(r.complementarity) << ", dual " << format_double(r.dual_feasibility)
            << ", " << (r.pass ? "pass" : "FAIL") << " (threshold "
            << format_double(r.threshold) << ")\n";
}

void print_regularity_line(const RegularityReport& r) {
  std::cout << "regularity (" << r.mode << "): ";
  if (r.mode == "licq")
    std::cout << "min singular value " << format_double(r.min_singular_value);
  else
    std::cout << "certificate " << format_double(r.certificate_value);
  std::cout << ", " << (r.verdict ? "ok" : "SUSPECT") << "\n  note: " << r.note << "\n";
}

void print_trace_lines(const std::vector<IterateRecord>& trace) {
  for (const IterateRecord& r : trace) {
    std::cout << "k=" << format_double(r.k) << " stat=" << format_double(r.stationarity)
              << " feas=" << format_double(r.feasibility)
              << " comp=" << format_double(r.complementarity)
              << " dual=" << format_double(r.dual_feasibility)
              << " |lambda|=" << format_double(norm2(r.lambda)) << " inner=" << r.inner_iters
              << "\n";
  }
}

struct SolveArgs {
  std::string problem_path;
  std::string x0_text;
  std::string trace_path;
  SolverConfig cfg;
  bool json = false;
};

struct ReplayArgs {
  std::string problem_path;
  std::string xbar_text;
  std::string trace_path;
  SolverConfig cfg;
  bool delta_given = false;
  bool json = false;
};

struct CheckArgs {
  std::string problem_path;
  std::string x_text;
  std::string lambda_text;
  double tol = 1e-6;
  uint64_t seed = 0;
  bool json = false;
};

struct ConeTestArgs {
  std::string cone_text;
  int samples = 1000;
  uint64_t seed = 0;
  bool json = false;
};

struct GradTestArgs {
  int samples = 1000;
  uint64_t seed = 0;
  bool json = false;
};

int run_solve(const SolveArgs& a) {
  const Problem p = load_problem(a.problem_path);
  Vec x0(static_cast<size_t>(p.n), 0.0);
  if (p.x0) x0 = *p.x0;
  if (!a.x0_text.empty()) x0 = parse_number_list(a.x0_text);
  if (static_cast<int>(x0.size()) != p.n)
    throw std::invalid_argument("--x0 has dimension " + std::to_string(x0.size()) +
                                ", expected " + std::to_string(p.n));

  const SolveResult res = solve(p, x0, a.cfg);
  if (!a.trace_path.empty()) {
    write_trace_csv(a.trace_path, res.trace);
    write_trace_sidecar(a.trace_path, res.trace);
  }
  if (a.json) {
    std::cout << solve_to_json(res).dump(2) << "\n";
  } else {
    std::cout << "problem: " << p.name << " (n=" << p.n << ", cone " << p.cone.describe()
              << ")\n";
    print_trace_lines(res.trace);
    std::cout << "status: "
              << (res.status == SolveStatus::Ok
                      ? "ok"
                      : res.status == SolveStatus::NoConverge ? "no-converge"
                                                              : "regularity-suspect")
              << "\n";
    if (!res.message.empty()) std::cout << "note: " << res.message << "\n";
    std::cout << "x: " << join_numbers(res.x) << "\nlambda: " << join_numbers(res.lambda)
              << "\n";
    print_kkt_line(res.kkt);
    std::cout << "outer iterations: " << res.trace.size() << "\n";
  }
  switch (res.status) {
    case SolveStatus::Ok: return 0;
    case SolveStatus::NoConverge: return 2;
    case SolveStatus::RegularitySuspect: return 3;
  }
  return 2;
}

int run_replay(const ReplayArgs& a) {
  const Problem p = load_problem(a.problem_path);
  Vec xbar;
  if (!a.xbar_text.empty())
    xbar = parse_number_list(a.xbar_text);
  else if (p.known_solution)
    xbar = *p.known_solution;
  else
    throw std::invalid_argument(
        "replay needs a reference point: pass --xbar or add known_solution to the file");
  if (static_cast<int>(xbar.size()) != p.n)
    throw std::invalid_argument("--xbar has dimension " + std::to_string(xbar.size()) +
                                ", expected " + std::to_string(p.n));
  SolverConfig cfg = a.cfg;
  if (!a.delta_given && p.delta) cfg.delta = *p.delta;

  const ReplayResult res = replay(p, xbar, cfg);
  if (!a.trace_path.empty()) {
    write_trace_csv(a.trace_path, res.trace);
    write_trace_sidecar(a.trace_path, res.trace);
  }
  if (a.json) {
    std::cout << replay_to_json(res).dump(2) << "\n";
  } else {
    std::cout << "problem: " << p.name << " (n=" << p.n << ", cone " << p.cone.describe()
              << ")\nreference point: " << join_numbers(xbar)
              << "\nball radius: " << format_double(cfg.delta) << "\n";
    print_trace_lines(res.trace);
    if (!res.trace.empty()) {
      std::cout << "final x: " << join_numbers(res.trace.back().x) << "\nfinal lambda: "
                << join_numbers(res.trace.back().lambda) << "\n";
    }
    std::cout << "interior: " << (res.interior_ok ? "ok" : "VIOLATED")
              << "\nmultiplier divergence: " << (res.multiplier_divergence ? "yes" : "no")
              << "\n";
    if (!res.message.empty()) std::cout << "note: " << res.message << "\n";
  }
  if (res.multiplier_divergence) return 3;
  if (!res.interior_ok) return 2;
  return 0;
}

int run_check(const CheckArgs& a) {
  const Problem p = load_problem(a.problem_path);
  Vec x;
  if (!a.x_text.empty())
    x = parse_number_list(a.x_text);
  else if (p.known_solution)
    x = *p.known_solution;
  else
    throw std::invalid_argument("check needs a point: pass --x or add known_solution to the file");
  if (static_cast<int>(x.size()) != p.n)
    throw std::invalid_argument("--x has dimension " + std::to_string(x.size()) +
                                ", expected " + std::to_string(p.n));
  Vec lambda;
  if (!a.lambda_text.empty())
    lambda = parse_number_list(a.lambda_text);
  else if (p.known_multiplier)
    lambda = *p.known_multiplier;
  else
    throw std::invalid_argument(
        "check needs a multiplier: pass --lambda or add known_multiplier to the file");
  if (static_cast<int>(lambda.size()) != p.cone.dim())
    throw std::invalid_argument("--lambda has dimension " + std::to_string(lambda.size()) +
                                ", expected " + std::to_string(p.cone.dim()));

  const KktReport kkt = kkt_residuals(p, x, lambda, a.tol);
  const RegularityReport reg = p.cone.is_pure_zero()
                                   ? licq_check(p, x)
                                   : conic_regularity_check(p, x, 50, a.seed);
  if (a.json) {
    nlohmann::ordered_json j;
    j["kkt"] = kkt_to_json(kkt);
    j["regularity"] = regularity_to_json(reg);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "problem: " << p.name << " (n=" << p.n << ", cone " << p.cone.describe()
              << ")\nx: " << join_numbers(x) << "\nlambda: " << join_numbers(lambda) << "\n";
    print_kkt_line(kkt);
    print_regularity_line(reg);
  }
  if (!kkt.pass) return 2;
  if (!reg.verdict) return 3;
  return 0;
}

int run_cone_test(const ConeTestArgs& a) {
  const Cone k = parse_cone_descriptor(a.cone_text);
  const ConeBatteryReport rep = run_cone_battery(k, a.samples, a.seed);
  if (a.json) {
    std::cout << cone_battery_to_json(rep).dump(2) << "\n";
  } else {
    std::cout << "cone: " << rep.cone << "\nsamples: " << rep.samples << " (seed " << rep.seed
              << ")\nmax reconstruction residual: " << format_double(rep.max_recon)
              << "\nmax orthogonality residual: " << format_double(rep.max_orth)
              << "\nmax characterization violation: " << format_double(rep.max_characterization)
              << "\nmax idempotence residual: " << format_double(rep.max_idempotence)
              << "\nmax homogeneity residual: " << format_double(rep.max_homogeneity)
              << "\nmax lipschitz excess: " << format_double(rep.max_lipschitz_excess)
              << "\nmax distance-gradient error: " << format_double(rep.max_grad_rel_err)
              << "\nresult: " << (rep.pass() ? "pass" : "FAIL") << "\n";
  }
  return rep.pass() ? 0 : 2;
}

int run_grad_test(const GradTestArgs& a) {
  const GradBatteryReport rep = run_grad_battery(a.samples, a.seed);
  if (a.json) {
    std::cout << grad_battery_to_json(rep).dump(2) << "\n";
  } else {
    std::cout << "samples: " << rep.samples << " (seed " << rep.seed
              << ")\nmax relative gradient error: " << format_double(rep.max_rel_err) << "\n";
    if (!rep.worst_expr.empty()) std::cout << "worst expression: " << rep.worst_expr << "\n";
    std::cout << "result: " << (rep.pass() ? "pass" : "FAIL") << "\n";
  }
  return rep.pass() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conic-constrained optimization toolkit"};
  app.require_subcommand(1);

  SolveArgs sa;
  CLI::App* solve_cmd = app.add_subcommand(
      "solve", "minimize the objective subject to the cone constraint");
  solve_cmd->add_option("problem", sa.problem_path, "problem JSON file")->required();
  solve_cmd->add_option("--x0", sa.x0_text, "start point, comma-separated");
  solve_cmd->add_option("--k0", sa.cfg.k0, "first penalty weight");
  solve_cmd->add_option("--rho", sa.cfg.rho, "penalty growth factor");
  solve_cmd->add_option("--max-outer", sa.cfg.max_outer, "outer iteration cap");
  solve_cmd->add_option("--inner-tol", sa.cfg.inner_tol, "inner gradient tolerance floor");
  solve_cmd->add_option("--prox-weight", sa.cfg.prox_weight, "proximal term weight");
  solve_cmd->add_option("--tol", sa.cfg.kkt_tol, "KKT stopping tolerance");
  solve_cmd->add_option("--seed", sa.cfg.seed, "seed for stochastic diagnostics");
  solve_cmd->add_option("--trace", sa.trace_path, "write per-iterate CSV here");
  solve_cmd->add_flag("--json", sa.json, "machine-readable output");

  ReplayArgs ra;
  CLI::App* replay_cmd = app.add_subcommand(
      "replay", "follow the penalty path anchored at a feasible reference point");
  replay_cmd->add_option("problem", ra.problem_path, "problem JSON file")->required();
  replay_cmd->add_option("--xbar", ra.xbar_text,
                         "feasible reference point (defaults to known_solution)");
  CLI::Option* delta_opt =
      replay_cmd->add_option("--delta", ra.cfg.delta, "trust ball radius");
  replay_cmd->add_option("--k0", ra.cfg.k0, "first penalty weight");
  replay_cmd->add_option("--rho", ra.cfg.rho, "penalty growth factor");
  replay_cmd->add_option("--max-outer", ra.cfg.max_outer, "outer iteration cap");
  replay_cmd->add_option("--inner-tol", ra.cfg.inner_tol, "inner gradient tolerance floor");
  replay_cmd->add_option("--trace", ra.trace_path, "write per-iterate CSV here");
  replay_cmd->add_flag("--json", ra.json, "machine-readable output");

  CheckArgs ca;
  CLI::App* check_cmd =
      app.add_subcommand("check", "evaluate KKT residuals and a regularity diagnostic");
  check_cmd->add_option("problem", ca.problem_path, "problem JSON file")->required();
  check_cmd->add_option("--x", ca.x_text, "point to check (defaults to known_solution)");
  check_cmd->add_option("--lambda", ca.lambda_text,
                        "multiplier (defaults to known_multiplier)");
  check_cmd->add_option("--tol", ca.tol, "KKT tolerance");
  check_cmd->add_option("--seed", ca.seed, "seed for the regularity multistart");
  check_cmd->add_flag("--json", ca.json, "machine-readable output");

  ConeTestArgs cta;
  CLI::App* cone_cmd =
      app.add_subcommand("cone-test", "run the projection invariant battery on a cone");
  cone_cmd->add_option("--cone", cta.cone_text, "cone descriptor, e.g. lorentz:3")->required();
  cone_cmd->add_option("--samples", cta.samples, "number of random points");
  cone_cmd->add_option("--seed", cta.seed, "RNG seed");
  cone_cmd->add_flag("--json", cta.json, "machine-readable output");

  GradTestArgs gta;
  CLI::App* grad_cmd = app.add_subcommand(
      "grad-test", "compare expression gradients against finite differences");
  grad_cmd->add_option("--samples", gta.samples, "number of random expressions");
  grad_cmd->add_option("--seed", gta.seed, "RNG seed");
  grad_cmd->add_flag("--json", gta.json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(sa);
    if (replay_cmd->parsed()) {
      ra.delta_given = delta_opt->count() > 0;
      return run_replay(ra);
    }
    if (check_cmd->parsed()) return run_check(ca);
    if (cone_cmd->parsed()) return run_cone_test(cta);
    if (grad_cmd->parsed()) return run_grad_test(gta);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
