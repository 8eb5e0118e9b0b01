#pragma once

// Randomized invariant batteries. These back the cone-test and grad-test
// commands and the test suite; given the same seed they are deterministic.

#include <cstdint>
#include <string>

#include "conekit/cones.hpp"
#include "conekit/rng.hpp"

namespace conekit {

// Random member of the cone (not uniform in any formal sense; spans rays,
// boundary, and interior well enough to exercise the characterization).
Vec sample_member(const Cone& k, Rng& rng, double scale = 2.0);

// Random ambient point, mean zero, O(1) scale.
Vec sample_point(int dim, Rng& rng, double scale = 1.5);

struct ConeBatteryReport {
  std::string cone;
  int samples = 0;
  uint64_t seed = 0;
  // Each residual is normalized by its tolerance's scale factor, so the
  // thresholds below are flat numbers.
  double max_recon = 0.0;            // must be exactly 0
  double max_orth = 0.0;             // |<p, p_polar>| / (1 + ||z||^2)   <= 1e-8
  double max_characterization = 0.0; // <z-p, c-p> / ((1+||z||)(1+||c||)) <= 1e-8
  double max_idempotence = 0.0;      // ||P(P(z)) - P(z)||               <= 1e-10
  double max_homogeneity = 0.0;      // ||P(az) - aP(z)|| / (1+a||z||)   <= 1e-10
  double max_lipschitz_excess = 0.0; // ||Pz - Pz'|| - ||z - z'||        <= 1e-12
  double max_grad_rel_err = 0.0;     // dist^2 gradient vs central FD    <= 1e-5
  bool pass() const {
    return max_recon == 0.0 && max_orth <= 1e-8 && max_characterization <= 1e-8 &&
           max_idempotence <= 1e-10 && max_homogeneity <= 1e-10 &&
           max_lipschitz_excess <= 1e-12 && max_grad_rel_err <= 1e-5;
  }
};

ConeBatteryReport run_cone_battery(const Cone& k, int samples, uint64_t seed,
                                   int members_per_point = 100);

// Gradient of z -> ||P_polar(z)||^2 against central finite differences
// (step 1e-6). For Lorentz cones the sample set includes points hugging the
// cone and polar boundaries (||z_2|| = |z_1| (1 +/- 1e-3)).
struct PenaltyGradReport {
  std::string cone;
  int samples = 0;
  uint64_t seed = 0;
  double max_rel_err = 0.0;
  bool pass() const { return max_rel_err <= 1e-5; }
};

PenaltyGradReport run_penalty_grad_battery(const Cone& k, int samples, uint64_t seed);

// Forward-mode gradients of random smooth expressions against central finite
// differences with per-coordinate step 1e-6 (1 + |x_i|).
struct GradBatteryReport {
  int samples = 0;
  uint64_t seed = 0;
  double max_rel_err = 0.0;
  std::string worst_expr;
  bool pass() const { return max_rel_err <= 1e-5; }
};

GradBatteryReport run_grad_battery(int samples, uint64_t seed);

}  // namespace conekit
