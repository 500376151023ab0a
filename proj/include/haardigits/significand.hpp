#pragma once

#include <cstdint>

namespace haardigits {

// Integer base B >= 2 used for significands and digit laws.
class Base {
 public:
  explicit Base(int b);

  int value() const noexcept { return b_; }
  double as_double() const noexcept { return static_cast<double>(b_); }
  double log() const noexcept;

  friend bool operator==(Base, Base) = default;

 private:
  int b_;
};

// |x| = significand * B^exponent with 1 <= significand < B.
struct SignificandDecomposition {
  double significand;
  std::int64_t exponent;
  int sign;  // +1 or -1
};

// Base-B significand of a nonzero finite x; negative x uses |x|.
// Throws DomainError for zero or non-finite input.
SignificandDecomposition significand(double x, Base base);

// Leading digit floor(S_B(x)) in 1..B-1.
int leading_digit(double x, Base base);

}  // namespace haardigits
