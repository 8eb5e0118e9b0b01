#include "conekit/batteries.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "conekit/expr.hpp"
#include "conekit/expr_gen.hpp"

namespace conekit {

namespace {

// Central difference of the squared distance map at z, step h per coordinate.
Vec penalty_value_fd(const Cone& k, const Vec& z, double h) {
  Vec g(z.size(), 0.0);
  Vec w = z;
  for (size_t i = 0; i < z.size(); ++i) {
    const double zi = z[i];
    w[i] = zi + h;
    const double fp = penalty_value(k, w);
    w[i] = zi - h;
    const double fm = penalty_value(k, w);
    w[i] = zi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

double grad_rel_err(const Cone& k, const Vec& z) {
  const Vec analytic = scaled(project_polar(k, z), 2.0);
  const Vec fd = penalty_value_fd(k, z, 1e-6);
  return norm2(sub(fd, analytic)) / (1.0 + norm2(analytic));
}

}  // namespace

Vec sample_point(int dim, Rng& rng, double scale) {
  Vec z(static_cast<size_t>(dim));
  for (double& zi : z) zi = scale * rng.normal();
  return z;
}

Vec sample_member(const Cone& k, Rng& rng, double scale) {
  switch (k.kind()) {
    case ConeKind::Zero:
      return Vec(static_cast<size_t>(k.dim()), 0.0);
    case ConeKind::Nonpos: {
      Vec c(static_cast<size_t>(k.dim()));
      for (double& ci : c) ci = -std::fabs(scale * rng.normal());
      return c;
    }
    case ConeKind::Lorentz: {
      const int d = k.dim();
      if (d == 1) return Vec{std::fabs(scale * rng.normal())};
      Vec c(static_cast<size_t>(d), 0.0);
      double tail = 0.0;
      for (int i = 1; i < d; ++i) {
        c[static_cast<size_t>(i)] = scale * rng.normal();
        tail += c[static_cast<size_t>(i)] * c[static_cast<size_t>(i)];
      }
      tail = std::sqrt(tail);
      // Mix boundary rays with interior points.
      const bool boundary = rng.uniform01() < 0.3;
      c[0] = boundary ? tail : tail + std::fabs(scale * rng.normal());
      return c;
    }
    case ConeKind::Psd: {
      const int s = k.order();
      Mat g(s, s);
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) g(i, j) = scale * rng.normal();
      // Occasionally drop a column so the sample lands on the cone boundary.
      if (rng.uniform01() < 0.3 && s > 1) {
        const int col = rng.index(s);
        for (int i = 0; i < s; ++i) g(i, col) = 0.0;
      }
      Mat m(s, s);
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
          double acc = 0.0;
          for (int t = 0; t < s; ++t) acc += g(t, i) * g(t, j);
          m(i, j) = acc / static_cast<double>(s);
        }
      return svec_from_dense(m).v;
    }
    case ConeKind::Product: {
      Vec c;
      c.reserve(static_cast<size_t>(k.dim()));
      for (const Cone& part : k.parts()) {
        const Vec cp = sample_member(part, rng, scale);
        c.insert(c.end(), cp.begin(), cp.end());
      }
      return c;
    }
  }
  throw std::logic_error("sample_member: unreachable");
}

ConeBatteryReport run_cone_battery(const Cone& k, int samples, uint64_t seed,
                                   int members_per_point) {
  ConeBatteryReport rep;
  rep.cone = k.describe();
  rep.samples = samples;
  rep.seed = seed;
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const Vec z = sample_point(k.dim(), rng);
    const Vec p = project(k, z);
    const Vec pp = project_polar(k, z);
    const double zn = norm2(z);

    const MoreauCheck mc = moreau_check(k, z);
    rep.max_recon = std::max(rep.max_recon, mc.recon);
    rep.max_orth = std::max(rep.max_orth, mc.orth / (1.0 + zn * zn));

    // Projection characterization: <z - p, c - p> <= 0 for every member c.
    const Vec zmp = sub(z, p);
    for (int j = 0; j < members_per_point; ++j) {
      const Vec c = sample_member(k, rng);
      const double viol = dot(zmp, sub(c, p)) / ((1.0 + zn) * (1.0 + norm2(c)));
      rep.max_characterization = std::max(rep.max_characterization, viol);
    }

    rep.max_idempotence = std::max(rep.max_idempotence, norm2(sub(project(k, p), p)));

    const double a = rng.uniform(0.1, 3.0);
    const double homog =
        norm2(sub(project(k, scaled(z, a)), scaled(p, a))) / (1.0 + a * zn);
    rep.max_homogeneity = std::max(rep.max_homogeneity, homog);

    const Vec z2 = sample_point(k.dim(), rng);
    const double excess = norm2(sub(p, project(k, z2))) - norm2(sub(z, z2));
    rep.max_lipschitz_excess = std::max(rep.max_lipschitz_excess, excess);

    rep.max_grad_rel_err = std::max(rep.max_grad_rel_err, grad_rel_err(k, z));
  }
  return rep;
}

PenaltyGradReport run_penalty_grad_battery(const Cone& k, int samples, uint64_t seed) {
  PenaltyGradReport rep;
  rep.cone = k.describe();
  rep.samples = samples;
  rep.seed = seed;
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const Vec z = sample_point(k.dim(), rng);
    rep.max_rel_err = std::max(rep.max_rel_err, grad_rel_err(k, z));
  }
  if (k.kind() == ConeKind::Lorentz && k.dim() >= 2) {
    // Straddle both the cone boundary (z1 > 0) and the polar boundary
    // (z1 < 0), each from just inside and just outside.
    const int d = k.dim();
    for (const double sign : {1.0, -1.0}) {
      for (const double eps : {1e-3, -1e-3}) {
        for (int rep_i = 0; rep_i < 6; ++rep_i) {
          Vec u(static_cast<size_t>(d - 1));
          double un = 0.0;
          do {
            for (double& ui : u) ui = rng.normal();
            un = norm2(u);
          } while (un < 1e-8);
          const double z1 = sign * rng.uniform(0.5, 2.0);
          Vec z(static_cast<size_t>(d));
          z[0] = z1;
          const double tail = std::fabs(z1) * (1.0 + eps);
          for (int i = 1; i < d; ++i)
            z[static_cast<size_t>(i)] = u[static_cast<size_t>(i - 1)] / un * tail;
          rep.max_rel_err = std::max(rep.max_rel_err, grad_rel_err(k, z));
        }
      }
    }
  }
  return rep;
}

GradBatteryReport run_grad_battery(int samples, uint64_t seed) {
  GradBatteryReport rep;
  rep.samples = samples;
  rep.seed = seed;
  Rng rng(seed);
  int accepted = 0;
  int attempts = 0;
  const int max_attempts = samples * 20 + 100;
  while (accepted < samples && attempts < max_attempts) {
    ++attempts;
    const int n = 1 + rng.index(4);
    const std::string text = random_expression(rng, n);
    const Expr e = parse(text, n);
    Vec x(static_cast<size_t>(n));
    for (double& xi : x) xi = rng.uniform(-2.0, 2.0);
    double f = 0.0;
    Vec g;
    try {
      f = eval(e, x);
      g = grad(e, x);
    } catch (const EvalError&) {
      continue;  // generator keeps function domains safe; treat as a reject
    }
    const double gn = norm2(g);
    if (!std::isfinite(f) || !std::isfinite(gn) || std::fabs(f) > 1e6 || gn > 1e6)
      continue;

    Vec fd(static_cast<size_t>(n), 0.0);
    Vec w = x;
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      const double h = 1e-6 * (1.0 + std::fabs(x[static_cast<size_t>(i)]));
      const double xi = x[static_cast<size_t>(i)];
      try {
        w[static_cast<size_t>(i)] = xi + h;
        const double fp = eval(e, w);
        w[static_cast<size_t>(i)] = xi - h;
        const double fm = eval(e, w);
        fd[static_cast<size_t>(i)] = (fp - fm) / (2.0 * h);
      } catch (const EvalError&) {
        ok = false;
      }
      w[static_cast<size_t>(i)] = xi;
      if (!ok) break;
    }
    if (!ok) continue;

    ++accepted;
    const double rel = norm2(sub(fd, g)) / (1.0 + gn);
    if (rel > rep.max_rel_err) {
      rep.max_rel_err = rel;
      rep.worst_expr = text;
    }
  }
  rep.samples = accepted;
  return rep;
}

}  // namespace conekit
