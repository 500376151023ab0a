#pragma once

#include <cstdint>
#include <functional>

namespace haardigits::specfun {

// Stopping rule for adaptive quadrature: stop once the summed panel error is
// below max(abs_tol, rel_tol * |estimate|). max_depth bounds panel bisection.
struct QuadratureSpec {
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  int max_depth = 40;

  void validate() const;
};

double erf(double x);
double erfc(double x);

// ln Gamma(x) for x > 0.
double log_gamma(double x);

// Gamma(n/2 + 1/2) / Gamma(n/2), stable for very large n.
double gamma_half_ratio(std::int64_t n);

// Gamma(a) / Gamma(b) for a, b > 0, evaluated without forming either factor.
double gamma_ratio(double a, double b);

using Integrand = std::function<double(double)>;

// Adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b] with global
// bisection of the worst panel. Throws ConvergenceError (carrying the best
// estimate) if a panel would need to be split beyond spec.max_depth.
double integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec = {});

// Integral over [a, b] ⊆ [-1, 1] of w(x) / sqrt(1 - x^2), computed after the
// substitution x = sin(theta) so the endpoint singularity at |x| = 1 vanishes.
double integrate_arcsine(const Integrand& w, double a, double b, const QuadratureSpec& spec = {});

}  // namespace haardigits::specfun
