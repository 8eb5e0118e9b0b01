#pragma once

// Seeded random numbers for sampling batteries and multistart heuristics.
// std::uniform_real_distribution is implementation-defined, which would break
// the "same seed, byte-identical output" contract across toolchains, so the
// distributions are derived from raw mt19937_64 bits by hand.

#include <cmath>
#include <cstdint>
#include <random>

namespace conekit {

class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1): 53 random mantissa bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller (deterministic given the stream).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  uint64_t bits() { return gen_(); }

  // Integer in [0, n).
  int index(int n) { return static_cast<int>(uniform01() * n) % n; }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace conekit
