#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "haardigits/digit_law.hpp"
#include "haardigits/errors.hpp"
#include "haardigits/rng.hpp"
#include "haardigits/samplers.hpp"
#include "haardigits/stats.hpp"

using namespace haardigits;

namespace {

const Base b10(10);

// Bisection inverse of law_cdf; independent of the samplers.
double quantile(const DigitLaw& law, double u) {
  double lo = 1.0, hi = law.base().as_double();
  for (int i = 0; i < 200 && hi - lo > 0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (law_cdf(law, mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> benford_draws(std::size_t n, std::uint64_t seed) {
  RngStream rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = sample_log_uniform(b10, 3, rng);
  return v;
}

}  // namespace

TEST_CASE("build_empirical") {
  const std::vector<double> digits{1, 2, 3, 4, 5, 6, 7, 8, 9};
  const auto emp = build_empirical(digits, b10);
  CHECK(emp.size() == 9);
  for (auto c : emp.digit_counts()) CHECK(c == 1);

  std::vector<double> powers;
  for (int j = -5; j <= 5; ++j) powers.push_back(std::pow(10.0, j));
  const auto p = build_empirical(powers, b10);
  for (double v : p.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(p.digit_counts()[0] == powers.size());

  const std::vector<double> dirty{0.0, 2.0, NAN, -30.0, INFINITY};
  const auto d = build_empirical(dirty, b10);
  CHECK(d.size() == 2);
  CHECK(d.rejected() == 3);
  CHECK(d.ecdf(2.0) == 0.5);
  CHECK(d.ecdf(3.0) == 1.0);
  CHECK(d.ecdf(1.0) == 0.0);

  CHECK_THROWS_AS(build_empirical(std::vector<double>{}, b10), DomainError);
  CHECK_THROWS_AS(build_empirical(std::vector<double>{0.0, NAN}, b10), DomainError);

  const auto draws = benford_draws(1'000'000, 42);
  const auto big = build_empirical(draws, b10);
  CHECK(std::fabs(double(big.digit_counts()[0]) / big.size() - 0.30103) < 0.002);
  std::uint64_t total = 0;
  for (auto c : big.digit_counts()) total += c;
  CHECK(total == big.size());
  CHECK(std::is_sorted(big.values().begin(), big.values().end()));
}

TEST_CASE("KS statistic on exact quantiles") {
  const std::size_t N = 2000;
  for (const auto& law : {DigitLaw::benford(b10), DigitLaw::power(b10, 2.0), DigitLaw::uniform(b10),
                          DigitLaw::sphere_exact({9, b10})}) {
    CAPTURE(law.name());
    std::vector<double> q;
    for (std::size_t i = 1; i <= N; ++i) q.push_back(quantile(law, (i - 0.5) / N));
    const auto rep = ks_statistic(build_empirical(q, b10), law);
    CHECK(rep.statistic <= 1.0 / (2.0 * N) + 1e-12);
    CHECK(rep.pass);
  }
}

TEST_CASE("KS distinguishes Benford from uniform") {
  // Grid-search oracle for the analytic sup-gap.
  double gap = 0.0;
  for (int i = 0; i <= 90000; ++i) {
    const double s = 1.0 + 9.0 * i / 90000.0;
    gap = std::max(gap, std::fabs(std::log10(s) - (s - 1.0) / 9.0));
  }
  // Maximized where 1/(s ln 10) = 1/9.
  const double s_star = 9.0 / std::log(10.0);
  CHECK(gap == doctest::Approx(std::log10(s_star) - (s_star - 1.0) / 9.0).epsilon(1e-8));

  const auto emp = build_empirical(benford_draws(100'000, 42), b10);
  const auto bad = ks_statistic(emp, DigitLaw::uniform(b10));
  CHECK(bad.statistic > 0.05);
  CHECK(std::fabs(bad.statistic - gap) < 0.01);
  CHECK_FALSE(bad.pass);
  CHECK(bad.p_approx < 1e-6);

  const auto good = ks_statistic(emp, DigitLaw::benford(b10));
  CHECK(good.statistic < 1.36 / std::sqrt(1e5) * 1.5);
  CHECK(good.pass);
  CHECK(good.p_approx > kDefaultAlpha);
  CHECK(good.samples == 100'000);

  const auto prod = DigitLaw::product({DigitLaw::benford(b10)});
  CHECK_THROWS_AS(ks_statistic(emp, prod), UnsupportedError);
}

TEST_CASE("Kolmogorov tail and critical value") {
  CHECK(kolmogorov_tail(1.358) == doctest::Approx(0.05).epsilon(0.01));
  CHECK(kolmogorov_tail(1.949) == doctest::Approx(0.001).epsilon(0.02));
  const double c = ks_critical_value(10'000, 0.05);
  CHECK(c * (100.0 + 0.12 + 0.0011) == doctest::Approx(1.358).epsilon(1e-3));
  CHECK(ks_critical_value(100, 0.001) > ks_critical_value(100, 0.05));
}

TEST_CASE("chi-square first digit") {
  const auto law = DigitLaw::benford(b10);
  const auto p = first_digit_probs(law);
  SUBCASE("proportional counts give zero") {
    const auto uni = DigitLaw::uniform(b10);
    std::vector<double> xs;
    for (int d = 1; d <= 9; ++d)
      for (int r = 0; r < 100; ++r) xs.push_back(d + 0.5);
    const auto rep = chi_square_first_digit(build_empirical(xs, b10), uni);
    CHECK(rep.statistic == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rep.dof == 8);
    CHECK(rep.pass);
  }

  SUBCASE("uniform digits against Benford") {
    const int N = 100'000;
    RngStream rng(42);
    std::vector<double> xs(N);
    for (auto& x : xs) x = rng.uniform(1.0, 10.0);
    const auto emp = build_empirical(xs, b10);
    double expected = 0.0;
    for (double pb : p) expected += N * (1.0 / 9.0 - pb) * (1.0 / 9.0 - pb) / pb;
    const auto rep = chi_square_first_digit(emp, law);
    CHECK(rep.statistic > 100 * 26.12);
    CHECK(rep.statistic == doctest::Approx(expected).epsilon(0.05));
    CHECK_FALSE(rep.pass);
  }

  SUBCASE("critical value and approximations") {
    CHECK(chi_square_critical(8, 1e-3) == doctest::Approx(26.1245).epsilon(1e-5));
    CHECK(chi_square_critical(64, 0.05) == doctest::Approx(83.675).epsilon(1e-4));
    CHECK(chi_square_tail_wilson_hilferty(26.1245, 8) == doctest::Approx(1e-3).epsilon(0.15));
    CHECK(chi_square_tail_wilson_hilferty(0.0, 8) == doctest::Approx(1.0));
  }

  SUBCASE("too few samples") {
    const std::vector<double> few{1, 2, 3};
    CHECK_THROWS_AS(chi_square_first_digit(build_empirical(few, b10), law), DomainError);
  }
}

TEST_CASE("chi-square independence") {
  const std::vector<std::vector<std::uint64_t>> prop{{10, 20}, {30, 60}};
  const auto rep = chi_square_independence(prop);
  CHECK(rep.statistic == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rep.dof == 1);
  // Classic 2x2 example: (a-E)^2/E summed by hand.
  const std::vector<std::vector<std::uint64_t>> t{{20, 30}, {30, 20}};
  CHECK(chi_square_independence(t).statistic == doctest::Approx(4.0));
  const std::vector<std::vector<std::uint64_t>> with_zero_row{{20, 30}, {0, 0}, {30, 20}};
  CHECK(chi_square_independence(with_zero_row).dof == 1);
  const std::vector<std::vector<std::uint64_t>> dependent{{100, 0}, {0, 100}};
  CHECK_FALSE(chi_square_independence(dependent).pass);
}

TEST_CASE("two-sample KS distance") {
  CHECK(ks_two_sample_distance({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_two_sample_distance({1, 2}, {3, 4}) == 1.0);
  CHECK(ks_two_sample_distance({1, 2, 3, 4}, {3, 4, 5, 6}) == doctest::Approx(0.5));
}

TEST_CASE("total variation distance") {
  const auto benford = DigitHistogram::from_law(DigitLaw::benford(b10));
  CHECK(tv_distance(benford, benford) == 0.0);
  std::vector<std::uint64_t> one(9, 0), nine(9, 0);
  one[0] = 5;
  nine[8] = 7;
  CHECK(tv_distance(DigitHistogram::from_counts(b10, one), DigitHistogram::from_counts(b10, nine)) == 1.0);
  CHECK_THROWS_AS(tv_distance(benford, DigitHistogram::from_law(DigitLaw::benford(Base(8)))), DomainError);

  RngStream rng(42);
  auto random_hist = [&] {
    std::vector<std::uint64_t> c(9);
    for (auto& v : c) v = rng.below(1000);
    c[0] += 1;
    return DigitHistogram::from_counts(b10, c);
  };
  for (int t = 0; t < 200; ++t) {
    const auto a = random_hist(), b = random_hist(), c = random_hist();
    CHECK(tv_distance(a, b) == tv_distance(b, a));
    CHECK(tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c) + 1e-15);
    CHECK(tv_distance(a, b) >= 0.0);
    CHECK(tv_distance(a, b) <= 1.0);
  }
  const auto emp = build_empirical(benford_draws(100'000, 1), b10);
  CHECK(tv_distance(DigitHistogram::from_empirical(emp), benford) < 0.01);
}

TEST_CASE("S^100 and S^10000 digit histograms are close") {
  auto hist = [](std::int64_t n, std::uint64_t seed) {
    RngStream rng(seed);
    std::vector<double> xs(1'000'000);
    for (auto& x : xs) x = sample_sphere_leading(n, 1, rng)[0];
    return DigitHistogram::from_empirical(build_empirical(xs, b10));
  };
  CHECK(tv_distance(hist(100, 42), hist(10'000, 42)) < 0.01);
}
