#pragma once

// Random smooth expressions for differentiation batteries. Generated text is
// safe by construction on [-3, 3]^n: log/sqrt arguments are of the form
// c + (...)^2 with c >= 1.5, denominators are 2 + (...)^2, and exp only wraps
// bounded subexpressions, so evaluation never leaves the domain and
// magnitudes stay finite-difference friendly.

#include <string>

#include "conekit/rng.hpp"

namespace conekit {

// Returns expression text over variables x1..xn.
std::string random_expression(Rng& rng, int n);

}  // namespace conekit
