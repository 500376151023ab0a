#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "haardigits/significand.hpp"
#include "haardigits/sphere_laws.hpp"

namespace haardigits {

class DigitLaw;

namespace law {

struct Benford {
  Base base;
};

// Significand density proportional to s^{-k} on [1, B); k = 1 is Benford.
struct PowerLaw {
  Base base;
  double k;
};

struct UniformSig {
  Base base;
};

struct SphereExact {
  SphereLawParams params;
};

struct SphereErf {
  SphereLawParams params;
};

// Limiting family F_n.
struct SphereLimit {
  SphereLawParams params;
};

// Independent coordinates; evaluated coordinatewise.
struct Product {
  std::vector<DigitLaw> factors;
};

}  // namespace law

// A probability law for base-B significands on [1, B).
class DigitLaw {
 public:
  using Variant = std::variant<law::Benford, law::PowerLaw, law::UniformSig, law::SphereExact,
                               law::SphereErf, law::SphereLimit, law::Product>;

  static DigitLaw benford(Base base);
  // Throws DomainError unless k > 0.
  static DigitLaw power(Base base, double k);
  static DigitLaw uniform(Base base);
  static DigitLaw sphere_exact(SphereLawParams params);
  static DigitLaw sphere_erf(SphereLawParams params);
  static DigitLaw sphere_limit(SphereLawParams params);
  static DigitLaw product(std::vector<DigitLaw> factors);

  // Law of a coordinate whose density on a scale window is proportional to
  // x^{-j}: Benford for j = 1, PowerLaw(B, j) otherwise.
  static DigitLaw for_density_exponent(Base base, double j);

  const Variant& variant() const noexcept { return v_; }
  bool is_product() const noexcept { return std::holds_alternative<law::Product>(v_); }
  // Base of a scalar law (the first factor's base for a product).
  Base base() const;
  std::string name() const;

 private:
  explicit DigitLaw(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

// P(S_B <= s) for s in [1, B]; exactly 0 at s = 1 and 1 at s = B.
// Throws DomainError outside [1, B], UnsupportedError for a product law.
double law_cdf(const DigitLaw& law, double s);
double law_density(const DigitLaw& law, double s);

// Joint CDF / density of a product law at one point per factor (a scalar law
// is accepted as a one-factor product).
double joint_cdf(const DigitLaw& law, std::span<const double> s);
double joint_density(const DigitLaw& law, std::span<const double> s);

// Significand CDF of a variable with density x^{-k} on the window [1, B^m).
double windowed_power_cdf(Base base, double k, int m, double s);

// Probabilities of leading digits 1..B-1.
std::vector<double> first_digit_probs(const DigitLaw& law);

}  // namespace haardigits
