#pragma once

#include <cstddef>
#include <functional>

#include "lorentzw/vec4.hpp"

namespace lorentzw {

using Integrand = std::function<Vec4(double)>;

struct QuadResult {
  Vec4 value;
  double error;       // accumulated error estimate, max-abs norm
  std::size_t evals;  // integrand evaluations spent
};

// One Gauss-Kronrod 15(7) application on [a,b]. error is the max-abs
// difference between the Kronrod and embedded Gauss values.
QuadResult gk15(const Integrand& f, double a, double b);

// Globally adaptive bisection driven by per-segment GK15 error, worst
// segment first. Accepts when the summed error estimate drops below
// tol*max(1, |value|) (combined absolute and relative test). Throws
// QuadratureError once max_evals integrand evaluations are spent.
QuadResult integrate(const Integrand& f, double a, double b, double tol = 1e-10,
                     std::size_t max_evals = 1000000);

}  // namespace lorentzw
