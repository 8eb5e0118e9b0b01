#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "conekit/batteries.hpp"
#include "conekit/cones.hpp"
#include "conekit/rng.hpp"

using namespace conekit;

namespace {

void check_vec(const Vec& got, const Vec& want, double tol) {
  REQUIRE(got.size() == want.size());
  for (size_t i = 0; i < got.size(); ++i) CHECK(std::fabs(got[i] - want[i]) <= tol);
}

}  // namespace

TEST_CASE("zero cone projects to the origin") {
  const Cone k = Cone::zero(2);
  check_vec(project(k, {1.2, -3.0}), {0.0, 0.0}, 0.0);
  check_vec(project_polar(k, {1.2, -3.0}), {1.2, -3.0}, 0.0);
  CHECK(dist_to_cone(k, {3.0, 4.0}) == 5.0);
  CHECK(membership(k, {0.0, 0.0}, 1e-12));
  CHECK_FALSE(membership(k, {1e-6, 0.0}, 1e-9));
}

TEST_CASE("nonpositive cone clamps coordinates") {
  const Cone k = Cone::nonpos(3);
  check_vec(project(k, {1.5, -2.0, 0.0}), {0.0, -2.0, 0.0}, 0.0);
  check_vec(project_polar(k, {1.5, -2.0, 0.0}), {1.5, 0.0, 0.0}, 0.0);
  // The complement of the clamp is exactly the positive part, bitwise.
  const Vec z{0.25, -0.75, 3.5};
  const Vec pp = project_polar(k, z);
  for (size_t i = 0; i < z.size(); ++i) CHECK(pp[i] == std::max(z[i], 0.0));
}

TEST_CASE("lorentz projection: all three branches") {
  const Cone k = Cone::lorentz(2);
  // Middle branch; dist((0,1), L2) = sqrt(2)/2.
  check_vec(project(k, {0.0, 1.0}), {0.5, 0.5}, 1e-15);
  CHECK(std::fabs(dist_to_cone(k, {0.0, 1.0}) - 0.70710678118654757) <= 1e-15);
  // Inside: identity, bitwise.
  const Vec inside{3.0, 1.0};
  CHECK(project(k, inside) == inside);
  // Polar region: projects to the apex.
  check_vec(project(k, {-5.0, 1.0}), {0.0, 0.0}, 0.0);
  // Another middle-branch point with a negative tail coordinate.
  check_vec(project(k, {1.0, -2.0}), {1.5, -1.5}, 1e-15);

  const Cone k3 = Cone::lorentz(3);
  check_vec(project(k3, {1.0, 2.0, 2.0}),
            {1.9142135623730951, 1.3535533905932737, 1.3535533905932737}, 1e-15);

  // Lorentz(1) is the half-line x1 >= 0.
  const Cone k1 = Cone::lorentz(1);
  CHECK(project(k1, {-3.0})[0] == 0.0);
  CHECK(project(k1, {2.0})[0] == 2.0);
}

TEST_CASE("lorentz projection lands on the boundary with orthogonal residual") {
  const Cone k = Cone::lorentz(4);
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    const Vec z = sample_point(4, rng, 2.0);
    const Vec p = project(k, z);
    double tail = 0.0;
    for (size_t i = 1; i < p.size(); ++i) tail += p[i] * p[i];
    tail = std::sqrt(tail);
    CHECK(p[0] >= tail - 1e-12);  // member
    const MoreauCheck mc = moreau_check(k, z);
    CHECK(mc.recon == 0.0);
    CHECK(mc.orth <= 1e-12 * (1.0 + norm2(z) * norm2(z)));
  }
}

TEST_CASE("svec embedding preserves the trace inner product") {
  Mat a(3, 3), b(3, 3);
  const double av[9] = {2.0, 1.0, 0.5, 1.0, -1.0, 0.25, 0.5, 0.25, 3.0};
  const double bv[9] = {1.0, -2.0, 0.0, -2.0, 0.5, 1.5, 0.0, 1.5, -1.0};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      a(i, j) = av[3 * i + j];
      b(i, j) = bv[3 * i + j];
    }
  const SymMatrix sa = svec_from_dense(a);
  const SymMatrix sb = svec_from_dense(b);
  CHECK(std::fabs(trace_inner(sa, sb) - -4.75) <= 1e-12);  // trace(AB) by hand
  CHECK(std::fabs(dot(sa.v, sb.v) - -4.75) <= 1e-12);      // plain dot agrees

  // Round trip back to dense.
  const Mat back = svec_to_dense(sa);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(std::fabs(back(i, j) - a(i, j)) <= 1e-15);

  // Norm preservation: ||svec(A)|| = ||A||_F.
  CHECK(std::fabs(norm2(sa.v) - frob_norm(a)) <= 1e-12);
}

TEST_CASE("symmetric eigendecomposition invariants") {
  Rng rng(3);
  for (int t = 0; t < 25; ++t) {
    const int s = 2 + static_cast<int>(rng.index(4));  // orders 2..5
    Mat a(s, s);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j <= i; ++j) {
        const double v = rng.uniform(-2.0, 2.0);
        a(i, j) = v;
        a(j, i) = v;
      }
    const SymMatrix sm = svec_from_dense(a);
    const EigenPair ep = eigen_sym(sm);
    REQUIRE(static_cast<int>(ep.eigenvalues.size()) == s);

    // Descending order.
    for (int i = 0; i + 1 < s; ++i) CHECK(ep.eigenvalues[i] >= ep.eigenvalues[i + 1]);

    // Q^T Q = I.
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) {
        double acc = 0.0;
        for (int r = 0; r < s; ++r) acc += ep.q(r, i) * ep.q(r, j);
        CHECK(std::fabs(acc - (i == j ? 1.0 : 0.0)) <= 1e-10);
      }

    // Q diag(w) Q^T = A.
    const double scale = 1.0 + frob_norm(a);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) {
        double acc = 0.0;
        for (int r = 0; r < s; ++r) acc += ep.q(i, r) * ep.eigenvalues[r] * ep.q(j, r);
        CHECK(std::fabs(acc - a(i, j)) <= 1e-10 * scale);
      }
  }
}

TEST_CASE("psd projection clamps negative eigenvalues") {
  const Cone k = Cone::psd(2);
  // A = [[1,2],[2,1]] has eigenvalues 3 and -1; its projection is the rank-one
  // part 3/2 * [[1,1],[1,1]] and the distance is 1.
  Mat a(2, 2);
  a(0, 0) = 1.0;
  a(0, 1) = 2.0;
  a(1, 0) = 2.0;
  a(1, 1) = 1.0;
  const Vec z = svec_from_dense(a).v;
  const Vec want = {1.5, 1.5 * std::sqrt(2.0), 1.5};
  check_vec(project(k, z), want, 1e-12);
  CHECK(std::fabs(dist_to_cone(k, z) - 1.0) <= 1e-12);
  CHECK_FALSE(membership(k, z, 1e-8));
  CHECK(membership(k, project(k, z), 1e-8));

  // An already-PSD matrix projects within eigensolver accuracy.
  Mat b(2, 2);
  b(0, 0) = 2.0;
  b(0, 1) = 0.5;
  b(1, 0) = 0.5;
  b(1, 1) = 1.0;
  const Vec zb = svec_from_dense(b).v;
  check_vec(project(k, zb), zb, 1e-12);
}

TEST_CASE("product cone projects blockwise") {
  const Cone k = Cone::product({Cone::zero(1), Cone::nonpos(2), Cone::lorentz(2)});
  REQUIRE(k.dim() == 5);
  const Vec z{3.0, 1.0, -2.0, 0.0, 1.0};
  const Vec p = project(k, z);
  check_vec({p[0]}, project(Cone::zero(1), {3.0}), 0.0);
  check_vec({p[1], p[2]}, project(Cone::nonpos(2), {1.0, -2.0}), 0.0);
  check_vec({p[3], p[4]}, project(Cone::lorentz(2), {0.0, 1.0}), 0.0);
  CHECK(k.describe() == "product(zero:1,nonpos:2,lorentz:2)");
  CHECK_FALSE(k.is_pure_zero());
  CHECK(Cone::product({Cone::zero(2), Cone::zero(1)}).is_pure_zero());
}

TEST_CASE("self-dual lorentz: polar projection equals reflected projection") {
  const Cone k = Cone::lorentz(3);
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const Vec z = sample_point(3, rng, 2.0);
    const Vec pp = project_polar(k, z);
    const Vec reflected = scaled(project(k, scaled(z, -1.0)), -1.0);
    for (size_t i = 0; i < pp.size(); ++i)
      CHECK(std::fabs(pp[i] - reflected[i]) <= 1e-14 * (1.0 + norm2(z)));
  }
}

TEST_CASE("invariant battery passes on every cone shape") {
  const std::vector<Cone> cones = {
      Cone::zero(3), Cone::nonpos(3), Cone::lorentz(3), Cone::psd(2),
      Cone::product({Cone::zero(1), Cone::nonpos(2), Cone::lorentz(3)}),
  };
  for (const Cone& k : cones) {
    const ConeBatteryReport rep = run_cone_battery(k, 200, 42, 50);
    CAPTURE(rep.cone);
    CHECK(rep.max_recon == 0.0);
    CHECK(rep.max_orth <= 1e-8);
    CHECK(rep.max_characterization <= 1e-8);
    CHECK(rep.max_idempotence <= 1e-10);
    CHECK(rep.max_homogeneity <= 1e-10);
    CHECK(rep.max_lipschitz_excess <= 1e-12);
    CHECK(rep.max_grad_rel_err <= 1e-5);
    CHECK(rep.pass());
  }
}

TEST_CASE("squared distance and its chain-rule gradient") {
  const Cone k = Cone::zero(1);
  CHECK(penalty_value(k, {2.0}) == 4.0);
  Mat jh(1, 2);
  jh(0, 0) = -2.0;
  jh(0, 1) = -2.0;
  const Vec g = penalty_grad_chain(k, {2.0}, jh);
  check_vec(g, {-8.0, -8.0}, 0.0);

  // Inside the cone the distance is identically zero and so is the gradient.
  const Cone kl = Cone::lorentz(2);
  CHECK(penalty_value(kl, {3.0, 1.0}) == 0.0);
  Mat jh2(2, 2);
  jh2(0, 0) = 1.0;
  jh2(1, 1) = 1.0;
  check_vec(penalty_grad_chain(kl, {3.0, 1.0}, jh2), {0.0, 0.0}, 0.0);
}

TEST_CASE("cone construction is validated") {
  CHECK_THROWS_AS(Cone::zero(0), std::invalid_argument);
  CHECK_THROWS_AS(Cone::lorentz(-1), std::invalid_argument);
  CHECK_THROWS_AS(Cone::psd(0), std::invalid_argument);
  CHECK_THROWS_AS(Cone::product({}), std::invalid_argument);
  CHECK(Cone::psd(3).dim() == 6);
  CHECK(svec_dim(4) == 10);
}
