#pragma once

// Independent reference computations for the unit tests. Nothing here calls
// into the library's numerical routines.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>

namespace oracle {

// erf by its Maclaurin series 2/sqrt(pi) sum (-1)^k x^{2k+1} / (k! (2k+1)),
// summed in long double until the terms stop contributing.
inline double erf_series(double x) {
  long double term = x;  // (-1)^k x^{2k+1} / k!
  long double sum = 0.0L;
  const long double x2 = static_cast<long double>(x) * x;
  for (int k = 0; k < 400; ++k) {
    const long double contrib = term / (2 * k + 1);
    sum += contrib;
    if (std::fabs(contrib) < 1e-30L * std::fabs(sum)) break;
    term *= -x2 / (k + 1);
  }
  return static_cast<double>(2.0L / std::sqrt(std::numbers::pi_v<long double>) * sum);
}

// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

inline double log_factorial(int n) {
  long double s = 0.0L;
  for (int i = 2; i <= n; ++i) s += std::log(static_cast<long double>(i));
  return static_cast<double>(s);
}

// P(S_B(x_1) <= s) on S^1 via the arcsine closed form of the band probability.
inline double circle_sig_cdf(double B, double s) {
  double sum = 0.0;
  double scale = 1.0;
  for (int i = 1; i < 400; ++i) {
    scale /= B;
    sum += std::asin(s * scale) - std::asin(scale);
  }
  return 2.0 / std::numbers::pi * sum;
}

}  // namespace oracle
