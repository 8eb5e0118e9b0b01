#include <cmath>
#include <vector>

#include <doctest.h>

#include "conekit/kkt.hpp"

using namespace conekit;

namespace {

Problem make_eq_circle() {
  Problem p;
  p.name = "eq-circle";
  p.n = 2;
  p.objective = parse("x1 + x2", 2);
  p.constraints.push_back(parse("x1^2 + x2^2 - 2", 2));
  p.cone = Cone::zero(1);
  return p;
}

Problem make_soc_min() {
  Problem p;
  p.name = "soc-min";
  p.n = 2;
  p.objective = parse("x1", 2);
  p.constraints.push_back(parse("x1", 2));
  p.constraints.push_back(parse("x2", 2));
  p.cone = Cone::lorentz(2);
  return p;
}

Problem make_psd_min() {
  Problem p;
  p.name = "psd-min";
  p.n = 1;
  p.objective = parse("x1", 1);
  p.constraints.push_back(parse("x1 - 1", 1));
  p.constraints.push_back(parse("0", 1));
  p.constraints.push_back(parse("x1", 1));
  p.cone = Cone::psd(2);
  return p;
}

Problem make_licq_fail() {
  Problem p;
  p.name = "licq-fail";
  p.n = 1;
  p.objective = parse("x1", 1);
  p.constraints.push_back(parse("x1^2", 1));
  p.cone = Cone::zero(1);
  return p;
}

}  // namespace

TEST_CASE("analytic KKT pairs pass with near-zero residuals") {
  {
    const KktReport r = kkt_residuals(make_eq_circle(), {-1.0, -1.0}, {0.5});
    CHECK(r.stationarity <= 1e-12);
    CHECK(r.feasibility <= 1e-12);
    CHECK(r.complementarity <= 1e-12);
    CHECK(r.dual_feasibility == 0.0);
    CHECK(r.pass);
    CHECK(r.threshold == doctest::Approx(1e-6 * (1.0 + std::sqrt(2.0))).epsilon(1e-12));
  }
  {
    const KktReport r = kkt_residuals(make_soc_min(), {0.0, 0.0}, {-1.0, 0.0});
    CHECK(r.stationarity == 0.0);
    CHECK(r.feasibility == 0.0);
    CHECK(r.complementarity == 0.0);
    CHECK(r.dual_feasibility == 0.0);  // (-1, 0) lies in the polar cone exactly
    CHECK(r.pass);
  }
  {
    const KktReport r = kkt_residuals(make_psd_min(), {1.0}, {-1.0, 0.0, 0.0});
    CHECK(r.stationarity == 0.0);
    CHECK(r.feasibility <= 1e-12);
    CHECK(r.complementarity == 0.0);
    CHECK(r.dual_feasibility <= 1e-12);
    CHECK(r.pass);
  }
}

TEST_CASE("perturbed points and multipliers fail the KKT test") {
  const Problem p = make_eq_circle();
  {
    const KktReport r = kkt_residuals(p, {-1.01, -1.0}, {0.5});
    CHECK_FALSE(r.pass);
    CHECK(r.stationarity == doctest::Approx(0.01).epsilon(1e-9));
    CHECK(r.feasibility == doctest::Approx(0.0201).epsilon(1e-9));
  }
  {
    const KktReport r = kkt_residuals(p, {-1.0, -1.0}, {0.6});
    CHECK_FALSE(r.pass);
    CHECK(r.stationarity == doctest::Approx(0.2 * std::sqrt(2.0)).epsilon(1e-9));
  }
  {
    // A sign-flipped multiplier for the inequality violates dual feasibility.
    Problem q;
    q.n = 1;
    q.objective = parse("x1", 1);
    q.constraints.push_back(parse("1 - x1", 1));
    q.cone = Cone::nonpos(1);
    const KktReport r = kkt_residuals(q, {1.0}, {-1.0});
    CHECK(r.dual_feasibility == 1.0);  // projection of -1 onto the nonpositive cone
    CHECK_FALSE(r.pass);
  }
}

TEST_CASE("kkt_residuals validates dimensions") {
  const Problem p = make_eq_circle();
  CHECK_THROWS_AS(kkt_residuals(p, {1.0}, {0.5}), std::invalid_argument);
  CHECK_THROWS_AS(kkt_residuals(p, {1.0, 1.0}, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("licq check measures the smallest jacobian singular value") {
  {
    const RegularityReport r = licq_check(make_eq_circle(), {-1.0, -1.0});
    CHECK(r.mode == "licq");
    CHECK(r.verdict);
    CHECK(std::fabs(r.min_singular_value - 2.0 * std::sqrt(2.0)) <= 1e-12);
  }
  {
    // Duplicated constraint rows make the jacobian exactly singular.
    Problem p;
    p.n = 2;
    p.objective = parse("x1", 2);
    p.constraints.push_back(parse("x1 + x2 - 1", 2));
    p.constraints.push_back(parse("x1 + x2 - 1", 2));
    p.cone = Cone::zero(2);
    const RegularityReport r = licq_check(p, {0.5, 0.5});
    CHECK_FALSE(r.verdict);
    CHECK(r.min_singular_value <= 1e-7);
  }
  {
    const RegularityReport r = licq_check(make_licq_fail(), {0.0});
    CHECK_FALSE(r.verdict);
    CHECK(r.min_singular_value == 0.0);
  }
}

TEST_CASE("licq check refuses non-equality cones") {
  CHECK_THROWS_AS(licq_check(make_soc_min(), {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("conic regularity certificates match hand-derived minima") {
  {
    // Zero cone: minimize ||J^T a||^2 over |a| = 1 with J = (-2, -2): 8.
    const RegularityReport r = conic_regularity_check(make_eq_circle(), {-1.0, -1.0});
    CHECK(r.mode == "conic");
    CHECK(r.verdict);
    CHECK(std::fabs(r.certificate_value - 8.0) <= 1e-6);
    CHECK(r.note.find("heuristic") != std::string::npos);
  }
  {
    // Lorentz apex with J = I: the certificate is exactly 1 on the sphere.
    const RegularityReport r = conic_regularity_check(make_soc_min(), {0.0, 0.0});
    CHECK(r.verdict);
    CHECK(std::fabs(r.certificate_value - 1.0) <= 1e-6);
  }
  {
    // Unit-norm negative-semidefinite a minimizing (a11+a22)^2 + a22^2 is
    // a = diag(-1, 0), giving 1.
    const RegularityReport r = conic_regularity_check(make_psd_min(), {1.0});
    CHECK(r.verdict);
    CHECK(std::fabs(r.certificate_value - 1.0) <= 1e-6);
  }
  {
    // Vanishing jacobian and h = 0: every unit a witnesses failure.
    const RegularityReport r = conic_regularity_check(make_licq_fail(), {0.0});
    CHECK_FALSE(r.verdict);
    CHECK(r.certificate_value <= 1e-10);
  }
}

TEST_CASE("conic certificate is deterministic in the seed") {
  const Problem p = make_soc_min();
  const RegularityReport a = conic_regularity_check(p, {0.0, 0.0}, 50, 123);
  const RegularityReport b = conic_regularity_check(p, {0.0, 0.0}, 50, 123);
  CHECK(a.certificate_value == b.certificate_value);
  const RegularityReport c = conic_regularity_check(p, {0.0, 0.0}, 50, 7);
  CHECK(std::fabs(a.certificate_value - c.certificate_value) <= 1e-6);
}

TEST_CASE("both regularity modes agree on pure equality problems") {
  const Problem p = make_eq_circle();
  const RegularityReport licq = licq_check(p, {-1.0, -1.0});
  const RegularityReport conic = conic_regularity_check(p, {-1.0, -1.0});
  CHECK(licq.verdict == conic.verdict);
  // For one equality row the certificate is sigma_min^2.
  CHECK(std::fabs(conic.certificate_value -
                  licq.min_singular_value * licq.min_singular_value) <= 1e-6);

  const Problem q = make_licq_fail();
  CHECK(licq_check(q, {0.0}).verdict == conic_regularity_check(q, {0.0}).verdict);
}

TEST_CASE("conic check warns when the point is infeasible") {
  const RegularityReport r = conic_regularity_check(make_eq_circle(), {2.0, 2.0});
  CHECK(r.note.find("not in the cone") != std::string::npos);
}
