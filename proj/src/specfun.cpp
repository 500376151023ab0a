#include "haardigits/specfun.hpp"

#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "haardigits/errors.hpp"

namespace haardigits::specfun {

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw DomainError("quadrature tolerances must be positive");
  }
  if (max_depth < 1) {
    throw DomainError("quadrature max_depth must be >= 1");
  }
}

double erf(double x) {
  if (!std::isfinite(x)) throw DomainError("erf: non-finite argument");
  // Evaluate on |x| so that erf(-x) == -erf(x) bit for bit.
  const double v = boost::math::erf(std::fabs(x));
  return x < 0 ? -v : v;
}

double erfc(double x) {
  if (!std::isfinite(x)) throw DomainError("erfc: non-finite argument");
  return boost::math::erfc(x);
}

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma: argument must be finite and > 0");
  }
  return boost::math::lgamma(x);
}

double gamma_half_ratio(std::int64_t n) {
  if (n < 1) throw DomainError("gamma_half_ratio: n must be >= 1");
  // tgamma_delta_ratio(z, d) = Gamma(z) / Gamma(z + d).
  return 1.0 / boost::math::tgamma_delta_ratio(0.5 * static_cast<double>(n), 0.5);
}

double gamma_ratio(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("gamma_ratio: arguments must be > 0");
  return boost::math::tgamma_ratio(a, b);
}

namespace {

struct Panel {
  double a;
  double b;
  double value;
  double error;
  int depth;

  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const Integrand& f, double a, double b, int depth) {
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &error);
  // The single-panel error comes back on the reference interval [-1, 1].
  return {a, b, value, error * 0.5 * (b - a), depth};
}

}  // namespace

double integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  if (!(a <= b)) throw DomainError("integrate: require a <= b");
  if (a == b) return 0.0;

  std::priority_queue<Panel> panels;
  Panel whole = evaluate_panel(f, a, b, 0);
  double total = whole.value;
  double total_error = whole.error;
  panels.push(whole);

  while (total_error > std::max(spec.abs_tol, spec.rel_tol * std::fabs(total))) {
    Panel worst = panels.top();
    if (worst.depth >= spec.max_depth) {
      throw ConvergenceError("integrate: max_depth " + std::to_string(spec.max_depth) +
                                 " exceeded without convergence",
                             total, total_error);
    }
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = evaluate_panel(f, worst.a, mid, worst.depth + 1);
    Panel right = evaluate_panel(f, mid, worst.b, worst.depth + 1);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    // Running sums drift; resum occasionally so the stopping test is honest.
    if (panels.size() % 64 == 0) {
      double t = 0.0, e = 0.0;
      auto copy = panels;
      while (!copy.empty()) {
        t += copy.top().value;
        e += copy.top().error;
        copy.pop();
      }
      total = t;
      total_error = e;
    }
  }
  return total;
}

double integrate_arcsine(const Integrand& w, double a, double b, const QuadratureSpec& spec) {
  if (!(a >= -1.0 && b <= 1.0 && a <= b)) {
    throw DomainError("integrate_arcsine: require -1 <= a <= b <= 1");
  }
  return integrate([&w](double theta) { return w(std::sin(theta)); }, std::asin(a), std::asin(b),
                   spec);
}

}  // namespace haardigits::specfun
