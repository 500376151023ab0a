#include "haardigits/digit_law.hpp"

#include <cmath>
#include <sstream>

#include "haardigits/errors.hpp"

namespace haardigits {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_k(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("power-law exponent k must be > 0");
}

void check_s(Base base, double s) {
  if (!(s >= 1.0 && s <= base.as_double())) {
    throw DomainError("significand argument must lie in [1, B]");
  }
}

// With t = 1 - k: cdf = expm1(t ln s) / expm1(t ln B), density = t s^{-k} / expm1(t ln B).
double power_cdf(Base base, double k, double s) {
  if (k == 1.0) return std::log(s) / base.log();
  const double t = 1.0 - k;
  return std::expm1(t * std::log(s)) / std::expm1(t * base.log());
}

double power_density(Base base, double k, double s) {
  if (k == 1.0) return 1.0 / (s * base.log());
  const double t = 1.0 - k;
  return t * std::pow(s, -k) / std::expm1(t * base.log());
}

}  // namespace

DigitLaw DigitLaw::benford(Base base) { return DigitLaw(law::Benford{base}); }

DigitLaw DigitLaw::power(Base base, double k) {
  check_k(k);
  return DigitLaw(law::PowerLaw{base, k});
}

DigitLaw DigitLaw::uniform(Base base) { return DigitLaw(law::UniformSig{base}); }

DigitLaw DigitLaw::sphere_exact(SphereLawParams params) {
  params.validate();
  return DigitLaw(law::SphereExact{params});
}

DigitLaw DigitLaw::sphere_erf(SphereLawParams params) {
  params.validate();
  if (params.n < 2) throw DomainError("erf approximation requires n >= 2");
  return DigitLaw(law::SphereErf{params});
}

DigitLaw DigitLaw::sphere_limit(SphereLawParams params) {
  params.validate();
  return DigitLaw(law::SphereLimit{params});
}

DigitLaw DigitLaw::product(std::vector<DigitLaw> factors) {
  if (factors.empty()) throw DomainError("product law needs at least one factor");
  return DigitLaw(law::Product{std::move(factors)});
}

DigitLaw DigitLaw::for_density_exponent(Base base, double j) {
  if (j == 1.0) return benford(base);
  return power(base, j);
}

Base DigitLaw::base() const {
  return std::visit(overloaded{
                        [](const law::Benford& l) { return l.base; },
                        [](const law::PowerLaw& l) { return l.base; },
                        [](const law::UniformSig& l) { return l.base; },
                        [](const law::SphereExact& l) { return l.params.base; },
                        [](const law::SphereErf& l) { return l.params.base; },
                        [](const law::SphereLimit& l) { return l.params.base; },
                        [](const law::Product& l) { return l.factors.front().base(); },
                    },
                    v_);
}

std::string DigitLaw::name() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const law::Benford& l) { os << "benford(B=" << l.base.value() << ")"; },
                 [&](const law::PowerLaw& l) {
                   os << "power(B=" << l.base.value() << ",k=" << l.k << ")";
                 },
                 [&](const law::UniformSig& l) { os << "uniform(B=" << l.base.value() << ")"; },
                 [&](const law::SphereExact& l) {
                   os << "sphere-exact(B=" << l.params.base.value() << ",n=" << l.params.n << ")";
                 },
                 [&](const law::SphereErf& l) {
                   os << "sphere-erf(B=" << l.params.base.value() << ",n=" << l.params.n << ")";
                 },
                 [&](const law::SphereLimit& l) {
                   os << "sphere-limit(B=" << l.params.base.value() << ",n=" << l.params.n << ")";
                 },
                 [&](const law::Product& l) {
                   os << "product(";
                   for (std::size_t i = 0; i < l.factors.size(); ++i) {
                     os << (i ? "," : "") << l.factors[i].name();
                   }
                   os << ")";
                 },
             },
             v_);
  return os.str();
}

double law_cdf(const DigitLaw& law, double s) {
  if (law.is_product()) throw UnsupportedError("law_cdf: product law needs joint_cdf");
  const Base base = law.base();
  check_s(base, s);
  if (s == 1.0) return 0.0;
  if (s == base.as_double()) return 1.0;
  return std::visit(
      overloaded{
          [&](const law::Benford& l) { return std::log(s) / l.base.log(); },
          [&](const law::PowerLaw& l) { return power_cdf(l.base, l.k, s); },
          [&](const law::UniformSig& l) { return (s - 1.0) / (l.base.as_double() - 1.0); },
          [&](const law::SphereExact& l) { return sphere_sig_cdf_exact(l.params, s); },
          [&](const law::SphereErf& l) { return sphere_sig_cdf_erf(l.params, s); },
          [&](const law::SphereLimit& l) {
            return sphere_limit_F(l.params.n, l.params.base, s, l.params.tail_tol);
          },
          [&](const law::Product&) -> double { return 0.0; },
      },
      law.variant());
}

double law_density(const DigitLaw& law, double s) {
  if (law.is_product()) throw UnsupportedError("law_density: product law needs joint_density");
  check_s(law.base(), s);
  return std::visit(
      overloaded{
          [&](const law::Benford& l) { return 1.0 / (s * l.base.log()); },
          [&](const law::PowerLaw& l) { return power_density(l.base, l.k, s); },
          [&](const law::UniformSig& l) { return 1.0 / (l.base.as_double() - 1.0); },
          [&](const law::SphereExact& l) { return sphere_sig_density_exact(l.params, s); },
          [&](const law::SphereErf& l) { return sphere_sig_density_erf(l.params, s); },
          [&](const law::SphereLimit& l) {
            return sphere_limit_density(l.params.n, l.params.base, s, l.params.tail_tol);
          },
          [&](const law::Product&) -> double { return 0.0; },
      },
      law.variant());
}

namespace {

template <class Fn>
double coordinatewise(const DigitLaw& law, std::span<const double> s, Fn scalar) {
  if (!law.is_product()) {
    if (s.size() != 1) throw DomainError("scalar law takes exactly one coordinate");
    return scalar(law, s[0]);
  }
  const auto& factors = std::get<law::Product>(law.variant()).factors;
  if (s.size() != factors.size()) {
    throw DomainError("joint evaluation needs one coordinate per factor");
  }
  double prod = 1.0;
  for (std::size_t i = 0; i < factors.size(); ++i) prod *= coordinatewise(factors[i], s.subspan(i, 1), scalar);
  return prod;
}

}  // namespace

double joint_cdf(const DigitLaw& law, std::span<const double> s) {
  return coordinatewise(law, s, [](const DigitLaw& l, double x) { return law_cdf(l, x); });
}

double joint_density(const DigitLaw& law, std::span<const double> s) {
  return coordinatewise(law, s, [](const DigitLaw& l, double x) { return law_density(l, x); });
}

double windowed_power_cdf(Base base, double k, int m, double s) {
  check_k(k);
  if (m < 1) throw DomainError("window must span m >= 1 decades");
  check_s(base, s);
  const double B = base.as_double();
  // Mass of x^{-k} on [lo, hi].
  auto mass = [k](double lo, double hi) {
    if (k == 1.0) return std::log(hi / lo);
    const double t = 1.0 - k;
    return std::pow(lo, t) * std::expm1(t * std::log(hi / lo)) / t;
  };
  double num = 0.0;
  double den = 0.0;
  double decade = 1.0;
  for (int l = 0; l < m; ++l) {
    num += mass(decade, decade * s);
    den += mass(decade, decade * B);
    decade *= B;
  }
  if (s == B) return 1.0;
  return num / den;
}

std::vector<double> first_digit_probs(const DigitLaw& law) {
  if (law.is_product()) throw UnsupportedError("first_digit_probs: product law not supported");
  const int B = law.base().value();
  std::vector<double> probs(static_cast<std::size_t>(B - 1));
  double prev = 0.0;
  for (int d = 1; d < B; ++d) {
    const double next = law_cdf(law, static_cast<double>(d + 1));
    probs[static_cast<std::size_t>(d - 1)] = next - prev;
    prev = next;
  }
  return probs;
}

}  // namespace haardigits
