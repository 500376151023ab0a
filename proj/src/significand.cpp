#include "haardigits/significand.hpp"

#include <cmath>
#include <string>

#include "haardigits/errors.hpp"

namespace haardigits {

Base::Base(int b) : b_(b) {
  if (b < 2) {
    throw DomainError("base must be >= 2, got " + std::to_string(b));
  }
}

double Base::log() const noexcept { return std::log(as_double()); }

namespace {

// y * B^e without intermediate overflow for large |e| (subnormal inputs need
// scale factors beyond DBL_MAX).
double scale_by_power(double y, double b, std::int64_t e) {
  constexpr std::int64_t kChunk = 256;
  while (e > kChunk) {
    y *= std::pow(b, static_cast<double>(kChunk));
    e -= kChunk;
  }
  while (e < -kChunk) {
    y /= std::pow(b, static_cast<double>(kChunk));
    e += kChunk;
  }
  return e >= 0 ? y * std::pow(b, static_cast<double>(e)) : y / std::pow(b, static_cast<double>(-e));
}

}  // namespace

SignificandDecomposition significand(double x, Base base) {
  if (x == 0.0) {
    throw DomainError("significand undefined at zero");
  }
  if (!std::isfinite(x)) {
    throw DomainError("significand undefined for non-finite input");
  }
  const double b = base.as_double();
  const double ax = std::fabs(x);
  auto e = static_cast<std::int64_t>(std::floor(std::log(ax) / base.log()));
  double s = scale_by_power(ax, b, -e);
  // log() rounding can put s one decade off near exact powers of B.
  if (s >= b) {
    ++e;
    s = scale_by_power(ax, b, -e);
  } else if (s < 1.0) {
    --e;
    s = scale_by_power(ax, b, -e);
  }
  if (s >= b) s = std::nextafter(b, 0.0);
  if (s < 1.0) s = 1.0;
  return {s, e, x < 0 ? -1 : 1};
}

int leading_digit(double x, Base base) {
  return static_cast<int>(significand(x, base).significand);
}

}  // namespace haardigits
