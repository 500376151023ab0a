#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "haardigits/digit_law.hpp"
#include "haardigits/significand.hpp"

namespace haardigits {

inline constexpr double kDefaultAlpha = 1e-3;

// Sorted significands of a sample plus their leading-digit histogram.
class EmpiricalDigitDistribution {
 public:
  EmpiricalDigitDistribution(Base base, std::vector<double> significands, std::size_t rejected);

  Base base() const noexcept { return base_; }
  const std::vector<double>& values() const noexcept { return values_; }
  // digit_counts()[d - 1] counts leading digit d.
  const std::vector<std::uint64_t>& digit_counts() const noexcept { return counts_; }
  std::size_t size() const noexcept { return values_.size(); }
  // Zero or non-finite inputs dropped while building.
  std::size_t rejected() const noexcept { return rejected_; }
  // Fraction of significands <= s.
  double ecdf(double s) const;

 private:
  Base base_;
  std::vector<double> values_;
  std::vector<std::uint64_t> counts_;
  std::size_t rejected_;
};

// Throws DomainError when no usable (finite, nonzero) sample remains.
EmpiricalDigitDistribution build_empirical(std::span<const double> samples, Base base);

// Goodness-of-fit summary. pass compares the raw statistic with `critical`
// (the level-alpha threshold); p_approx is an asymptotic approximation.
struct GofReport {
  std::string test;
  double statistic = 0.0;
  int dof = 0;  // chi-square tests only
  double p_approx = 1.0;
  double critical = 0.0;
  double alpha = kDefaultAlpha;
  std::size_t samples = 0;
  bool pass = true;
};

// Kolmogorov-Smirnov distance between the ECDF and law_cdf, checked at every
// sample point from both sides. Critical value c_alpha / (sqrt(N) + 0.12 +
// 0.11/sqrt(N)) with c_alpha from the asymptotic Kolmogorov tail.
GofReport ks_statistic(const EmpiricalDigitDistribution& emp, const DigitLaw& law,
                       double alpha = kDefaultAlpha);

// Pearson chi-square of the leading-digit counts against first_digit_probs;
// dof = B - 2. Requires N >= 5 (B - 1).
GofReport chi_square_first_digit(const EmpiricalDigitDistribution& emp, const DigitLaw& law,
                                 double alpha = kDefaultAlpha);

// Pearson chi-square test of independence on an r x c contingency table,
// dof = (r - 1)(c - 1). Rows or columns with zero total are dropped.
GofReport chi_square_independence(const std::vector<std::vector<std::uint64_t>>& table,
                                  double alpha = kDefaultAlpha);

// Two-sample Kolmogorov-Smirnov distance sup |F_a - F_b|.
double ks_two_sample_distance(std::vector<double> a, std::vector<double> b);

// Asymptotic Kolmogorov tail P(K > lambda), first two terms of the series.
double kolmogorov_tail(double lambda);
double ks_critical_value(std::size_t n, double alpha);
// Upper tail of chi-square(dof) by the Wilson-Hilferty cube-root normal approximation.
double chi_square_tail_wilson_hilferty(double statistic, int dof);
// Exact chi-square upper quantile.
double chi_square_critical(int dof, double alpha);

// Normalized leading-digit frequencies for digits 1..B-1.
struct DigitHistogram {
  Base base;
  std::vector<double> probabilities;

  static DigitHistogram from_counts(Base base, std::span<const std::uint64_t> counts);
  static DigitHistogram from_empirical(const EmpiricalDigitDistribution& emp);
  static DigitHistogram from_law(const DigitLaw& law);
};

// Half the L1 distance between two histograms of the same base.
double tv_distance(const DigitHistogram& h1, const DigitHistogram& h2);

}  // namespace haardigits
