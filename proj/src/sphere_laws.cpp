#include "haardigits/sphere_laws.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "haardigits/errors.hpp"
#include "haardigits/specfun.hpp"

namespace haardigits {

namespace {

constexpr int kMaxDecades = 4000;

void check_sig_band(const SphereLawParams& p, double a, double b) {
  p.validate();
  const double B = p.base.as_double();
  if (!(a >= 1.0 && b <= B && a <= b)) {
    throw DomainError("significand band must satisfy 1 <= a <= b <= B");
  }
}

// (1 - x^2)^e, formed as (1-x)(1+x) to keep precision near |x| = 1.
double one_minus_sq_pow(double x, double e) {
  const double q = (1.0 - x) * (1.0 + x);
  if (q <= 0.0) return e == 0.0 ? 1.0 : 0.0;
  return std::pow(q, e);
}

double sphere_normalizer(std::int64_t n) {
  return specfun::gamma_half_ratio(n) / std::sqrt(std::numbers::pi);
}

// Integral of (1 - x^2)^{n/2 - 1} over [a, b] ⊆ [-1, 1].
double sphere_weight_integral(std::int64_t n, double a, double b) {
  const double e = 0.5 * static_cast<double>(n - 1);
  specfun::QuadratureSpec q;
  q.abs_tol = 1e-300;
  return specfun::integrate_arcsine([e](double x) { return one_minus_sq_pow(x, e); }, a, b, q);
}

// Difference erf(hi) - erf(lo) for 0 <= lo <= hi without cancellation when both
// arguments are large.
double erf_diff(double lo, double hi) {
  if (lo > 1.0) return specfun::erfc(lo) - specfun::erfc(hi);
  return specfun::erf(hi) - specfun::erf(lo);
}

}  // namespace

void SphereLawParams::validate() const {
  if (n < 1) throw DomainError("sphere dimension n must be >= 1");
  if (!(tail_tol > 0.0)) throw DomainError("tail_tol must be > 0");
}

double sphere_band_prob(std::int64_t n, double a, double b) {
  if (n < 1) throw DomainError("sphere dimension n must be >= 1");
  if (!(a >= -1.0 && b <= 1.0 && a < b)) {
    throw DomainError("sphere band must satisfy -1 <= a < b <= 1");
  }
  return sphere_normalizer(n) * sphere_weight_integral(n, a, b);
}

double sphere_sig_band_exact(const SphereLawParams& p, double a, double b) {
  check_sig_band(p, a, b);
  if (a == b) return 0.0;
  const double B = p.base.as_double();
  const double coef = 2.0 * sphere_normalizer(p.n);
  const double spread = std::sqrt(0.5 * static_cast<double>(p.n));
  double sum = 0.0;
  double scale = 1.0;
  for (int i = 1; i <= kMaxDecades; ++i) {
    scale /= B;
    const double term = coef * sphere_weight_integral(p.n, a * scale, b * scale);
    sum += term;
    // Past the bulk (b B^{-i} below one standard deviation) terms shrink
    // geometrically by 1/B, so the tail is below term / (B - 1).
    if (b * scale * spread <= 1.0 && term <= p.tail_tol * sum) break;
  }
  return std::min(sum, 1.0);
}

double sphere_sig_cdf_exact(const SphereLawParams& p, double s) {
  check_sig_band(p, 1.0, s);
  if (s == 1.0) return 0.0;
  return sphere_sig_band_exact(p, 1.0, s);
}

double sphere_sig_density_exact(const SphereLawParams& p, double s) {
  check_sig_band(p, 1.0, s);
  const double B = p.base.as_double();
  const double coef = 2.0 * sphere_normalizer(p.n);
  const double e = 0.5 * static_cast<double>(p.n) - 1.0;
  const double spread = std::sqrt(0.5 * static_cast<double>(p.n));
  double sum = 0.0;
  double scale = 1.0;
  for (int i = 1; i <= kMaxDecades; ++i) {
    scale /= B;
    const double term = coef * scale * one_minus_sq_pow(s * scale, e);
    sum += term;
    if (s * scale * spread <= 1.0 && term <= p.tail_tol * sum) break;
  }
  return sum;
}

static void check_erf_dimension(const SphereLawParams& p) {
  if (p.n < 2) throw DomainError("erf approximation requires n >= 2");
}

double sphere_sig_band_erf(const SphereLawParams& p, double a, double b) {
  check_sig_band(p, a, b);
  check_erf_dimension(p);
  if (a == b) return 0.0;
  const double B = p.base.as_double();
  const double c = std::sqrt(0.5 * static_cast<double>(p.n));
  double sum = 0.0;
  double scale = 1.0;
  for (int i = 1; i <= kMaxDecades; ++i) {
    scale /= B;
    const double term = erf_diff(c * a * scale, c * b * scale);
    sum += term;
    if (c * b * scale <= 1.0 && term <= p.tail_tol * sum) break;
  }
  return sum;
}

double sphere_sig_cdf_erf(const SphereLawParams& p, double s) {
  check_sig_band(p, 1.0, s);
  check_erf_dimension(p);
  if (s == 1.0) return 0.0;
  return sphere_sig_band_erf(p, 1.0, s);
}

double sphere_sig_density_erf(const SphereLawParams& p, double s) {
  check_sig_band(p, 1.0, s);
  check_erf_dimension(p);
  const double B = p.base.as_double();
  const double c = std::sqrt(0.5 * static_cast<double>(p.n));
  const double k = 2.0 / std::sqrt(std::numbers::pi);
  double sum = 0.0;
  double scale = 1.0;
  for (int i = 1; i <= kMaxDecades; ++i) {
    scale /= B;
    const double u = c * s * scale;
    const double term = k * c * scale * std::exp(-u * u);
    sum += term;
    if (u <= 1.0 && term <= p.tail_tol * sum) break;
  }
  return sum;
}

namespace {

// Lowest decade index i whose smaller argument c / B^i still lies below the
// point where erfc underflows; every term with a smaller index is exactly 0.
int limit_first_index(double c, double B) {
  constexpr double kErfcZero = 30.0;
  return static_cast<int>(std::floor(std::log(c / kErfcZero) / std::log(B)));
}

void check_limit_args(std::int64_t n, Base base, double x, double tail_tol) {
  if (n < 1) throw DomainError("F_n requires n >= 1");
  if (!(tail_tol > 0.0)) throw DomainError("tail_tol must be > 0");
  if (!(x >= 1.0 && x <= base.as_double())) throw DomainError("F_n argument must lie in [1, B]");
}

}  // namespace

double sphere_limit_F(std::int64_t n, Base base, double x, double tail_tol) {
  check_limit_args(n, base, x, tail_tol);
  if (x == 1.0) return 0.0;
  const double B = base.as_double();
  const double c = std::sqrt(0.5 * static_cast<double>(n));
  const int first = limit_first_index(c, B);
  double sum = 0.0;
  for (int i = first; i < first + kMaxDecades; ++i) {
    const double scale = std::pow(B, -static_cast<double>(i));
    const double term = erf_diff(c * scale, c * x * scale);
    sum += term;
    if (c * x * scale <= 1.0 && term <= tail_tol * sum) break;
  }
  return std::min(sum, 1.0);
}

double sphere_limit_density(std::int64_t n, Base base, double x, double tail_tol) {
  check_limit_args(n, base, x, tail_tol);
  const double B = base.as_double();
  const double c = std::sqrt(0.5 * static_cast<double>(n));
  const double k = 2.0 / std::sqrt(std::numbers::pi);
  const int first = limit_first_index(c, B);
  double sum = 0.0;
  for (int i = first; i < first + kMaxDecades; ++i) {
    const double scale = std::pow(B, -static_cast<double>(i));
    const double u = c * x * scale;
    const double term = k * c * scale * std::exp(-u * u);
    sum += term;
    if (u <= 1.0 && term <= tail_tol * sum) break;
  }
  return sum;
}

bool limit_regime_valid(std::int64_t n, Base base) {
  return std::sqrt(0.5 * static_cast<double>(n)) / base.as_double() > 4.0;
}

namespace {

// Radical sequence for the Halton points.
double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

double sphere_joint_band_prob(std::int64_t n, std::span<const Interval> bounds) {
  const auto k = static_cast<std::int64_t>(bounds.size());
  if (k < 1) throw DomainError("joint band needs at least one coordinate");
  if (k > 3) throw UnsupportedError("joint band probability supports k <= 3");
  if (k >= n + 1) throw DomainError("joint band requires k < n + 1");
  double outer_sq = 0.0;
  for (const auto& iv : bounds) {
    if (!(iv.lo >= 0.0 && iv.lo < iv.hi && iv.hi < 1.0)) {
      throw DomainError("joint band bounds must satisfy 0 <= a < b < 1");
    }
    outer_sq += iv.hi * iv.hi;
  }
  const double e = 0.5 * static_cast<double>(n - k - 1);
  // With a negative exponent the density blows up on the sphere boundary, so
  // the box has to stay strictly inside the unit ball.
  if (e < 0.0 && outer_sq >= 1.0) {
    throw DomainError("joint band region touches the unit ball boundary");
  }
  const double coef = std::pow(2.0 / std::sqrt(std::numbers::pi), static_cast<double>(k)) *
                      specfun::gamma_ratio(0.5 * static_cast<double>(n) + 0.5,
                                           0.5 * static_cast<double>(n - k) + 0.5);
  auto density = [e](double r2) { return r2 >= 1.0 ? 0.0 : std::pow(1.0 - r2, e); };

  specfun::QuadratureSpec q;
  q.abs_tol = 1e-13;
  q.rel_tol = 1e-11;
  q.max_depth = 50;

  if (k == 1) {
    const auto& b0 = bounds[0];
    return coef * specfun::integrate([&](double x) { return density(x * x); }, b0.lo, b0.hi, q);
  }
  if (k == 2) {
    const auto& b0 = bounds[0];
    const auto& b1 = bounds[1];
    auto inner = [&](double x1) {
      const double rem = 1.0 - x1 * x1;
      if (rem <= 0.0) return 0.0;
      // Clip at the ball so the integrand the inner rule sees is smooth.
      const double hi = std::min(b1.hi, std::sqrt(rem));
      if (hi <= b1.lo) return 0.0;
      return specfun::integrate([&](double x2) { return density(x1 * x1 + x2 * x2); }, b1.lo, hi,
                                q);
    };
    double x1_hi = b0.hi;
    if (b1.lo > 0.0) x1_hi = std::min(x1_hi, std::sqrt(1.0 - b1.lo * b1.lo));
    if (x1_hi <= b0.lo) return 0.0;
    return coef * specfun::integrate(inner, b0.lo, x1_hi, q);
  }

  constexpr std::uint64_t kPoints = 1u << 21;
  double volume = 1.0;
  for (const auto& iv : bounds) volume *= iv.hi - iv.lo;
  double acc = 0.0;
  for (std::uint64_t i = 1; i <= kPoints; ++i) {
    const double x = bounds[0].lo + (bounds[0].hi - bounds[0].lo) * radical_inverse(i, 2);
    const double y = bounds[1].lo + (bounds[1].hi - bounds[1].lo) * radical_inverse(i, 3);
    const double z = bounds[2].lo + (bounds[2].hi - bounds[2].lo) * radical_inverse(i, 5);
    acc += density(x * x + y * y + z * z);
  }
  return coef * volume * acc / static_cast<double>(kPoints);
}

double sphere_joint_sig_approx(std::int64_t n, Base base, std::span<const Interval> sig_bounds,
                               double tail_tol) {
  if (sig_bounds.empty()) throw DomainError("joint significand law needs at least one coordinate");
  const SphereLawParams p{n, base, tail_tol};
  double prod = 1.0;
  for (const auto& iv : sig_bounds) prod *= sphere_sig_band_erf(p, iv.lo, iv.hi);
  return prod;
}

}  // namespace haardigits
