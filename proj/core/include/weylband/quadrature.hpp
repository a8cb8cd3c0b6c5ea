#pragma once

#include <functional>

namespace weylband {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int levels = 0;
};

// Double-exponential (tanh-sinh) quadrature on [a, b] with level doubling
// until the estimated relative error drops below tol. Integrable endpoint
// singularities (x^{-1/2} and milder) are handled without substitutions.
// Throws QuadratureFailure if the estimate never reaches tol.
QuadratureResult integrate_de(const std::function<double(double)>& f, double a, double b,
                              double tol);

// Endpoint-aware variant: the integrand receives (x, d) where d > 0 is the
// distance from x to the nearest endpoint, evaluated without cancellation.
// Required whenever the integrand must resolve distances below ~1e-12.
QuadratureResult integrate_de2(const std::function<double(double, double)>& f, double a,
                               double b, double tol);

}  // namespace weylband
