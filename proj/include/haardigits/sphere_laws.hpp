#pragma once

#include <cstdint>
#include <span>

#include "haardigits/significand.hpp"

namespace haardigits {

// Law of the components of a uniform point on the unit sphere S^n ⊂ R^{n+1}.
struct SphereLawParams {
  std::int64_t n;           // sphere dimension; the point has n + 1 components
  Base base{10};
  double tail_tol = 1e-12;  // relative size below which series terms are dropped

  void validate() const;
};

struct Interval {
  double lo;
  double hi;
};

// P(a < x_1 < b) for x uniform on S^n, -1 <= a < b <= 1.
double sphere_band_prob(std::int64_t n, double a, double b);

// P(a < S_B(x_1) < b), 1 <= a <= b <= B: the band probability summed over all
// decades B^{-i}, i >= 1, and doubled for the negative half-space.
double sphere_sig_band_exact(const SphereLawParams& p, double a, double b);
double sphere_sig_cdf_exact(const SphereLawParams& p, double s);
double sphere_sig_density_exact(const SphereLawParams& p, double s);

// Gaussian (erf) approximation of the significand law, accurate as n -> inf.
double sphere_sig_band_erf(const SphereLawParams& p, double a, double b);
double sphere_sig_cdf_erf(const SphereLawParams& p, double s);
double sphere_sig_density_erf(const SphereLawParams& p, double s);

// Limiting law F_n: the erf sum taken over all integer decades i. F_n equals
// F_{n B^2}, so only n in [1, B^2) give distinct laws.
double sphere_limit_F(std::int64_t n, Base base, double x, double tail_tol = 1e-12);
double sphere_limit_density(std::int64_t n, Base base, double x, double tail_tol = 1e-12);

// sqrt(n/2)/B > 4: the one-sided erf sum for S^{n B^{2l}} is then within
// four standard deviations of F_n.
bool limit_regime_valid(std::int64_t n, Base base);

// P(a_j < |x_j| < b_j for j = 1..k), k = bounds.size() in {1, 2, 3}, bounds
// with 0 <= a_j < b_j < 1. Nested adaptive quadrature for k <= 2, Halton
// quasi-Monte Carlo (accuracy ~1e-4) for k = 3. The box may leave the unit
// ball only when the integrand vanishes continuously there (k < n).
double sphere_joint_band_prob(std::int64_t n, std::span<const Interval> bounds);

// Product over coordinates of sphere_sig_band_erf: asymptotic joint
// significand law of the first k = bounds.size() components.
double sphere_joint_sig_approx(std::int64_t n, Base base, std::span<const Interval> sig_bounds,
                               double tail_tol = 1e-12);

}  // namespace haardigits
