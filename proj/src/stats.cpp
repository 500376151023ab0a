#include "haardigits/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "haardigits/errors.hpp"
#include "haardigits/specfun.hpp"

namespace haardigits {

EmpiricalDigitDistribution::EmpiricalDigitDistribution(Base base, std::vector<double> significands,
                                                       std::size_t rejected)
    : base_(base),
      values_(std::move(significands)),
      counts_(static_cast<std::size_t>(base.value() - 1), 0),
      rejected_(rejected) {
  std::sort(values_.begin(), values_.end());
  for (double s : values_) {
    if (!(s >= 1.0 && s < base.as_double())) throw DomainError("significand outside [1, B)");
    ++counts_[static_cast<std::size_t>(static_cast<int>(s) - 1)];
  }
}

double EmpiricalDigitDistribution::ecdf(double s) const {
  const auto it = std::upper_bound(values_.begin(), values_.end(), s);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

EmpiricalDigitDistribution build_empirical(std::span<const double> samples, Base base) {
  std::vector<double> sig;
  sig.reserve(samples.size());
  std::size_t rejected = 0;
  for (double x : samples) {
    if (x == 0.0 || !std::isfinite(x)) {
      ++rejected;
      continue;
    }
    sig.push_back(significand(x, base).significand);
  }
  if (sig.empty()) throw DomainError("empirical distribution needs at least one usable sample");
  return EmpiricalDigitDistribution(base, std::move(sig), rejected);
}

double kolmogorov_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  const double l2 = lambda * lambda;
  const double p = 2.0 * (std::exp(-2.0 * l2) - std::exp(-8.0 * l2));
  return std::clamp(p, 0.0, 1.0);
}

namespace {

double stephens_scale(std::size_t n) {
  const double rn = std::sqrt(static_cast<double>(n));
  return rn + 0.12 + 0.11 / rn;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

}  // namespace

double ks_critical_value(std::size_t n, double alpha) {
  check_alpha(alpha);
  if (n == 0) throw DomainError("KS critical value needs n >= 1");
  // The two-term tail is decreasing for lambda above ~0.6; bisect there.
  double lo = 0.6, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_tail(mid) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) / stephens_scale(n);
}

double chi_square_tail_wilson_hilferty(double statistic, int dof) {
  if (dof < 1) throw DomainError("chi-square dof must be >= 1");
  if (statistic <= 0.0) return 1.0;
  const double k = static_cast<double>(dof);
  const double v = 2.0 / (9.0 * k);
  const double z = (std::cbrt(statistic / k) - (1.0 - v)) / std::sqrt(v);
  return std::clamp(0.5 * specfun::erfc(z / std::sqrt(2.0)), 0.0, 1.0);
}

double chi_square_critical(int dof, double alpha) {
  check_alpha(alpha);
  if (dof < 1) throw DomainError("chi-square dof must be >= 1");
  const boost::math::chi_squared dist(static_cast<double>(dof));
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

GofReport ks_statistic(const EmpiricalDigitDistribution& emp, const DigitLaw& law, double alpha) {
  if (law.is_product()) throw UnsupportedError("KS test needs a scalar law");
  if (!(law.base() == emp.base())) throw DomainError("law and sample bases differ");
  const auto& v = emp.values();
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = law_cdf(law, v[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  GofReport r;
  r.test = "ks";
  r.statistic = d;
  r.samples = v.size();
  r.alpha = alpha;
  r.p_approx = kolmogorov_tail(stephens_scale(v.size()) * d);
  r.critical = ks_critical_value(v.size(), alpha);
  r.pass = d <= r.critical;
  return r;
}

GofReport chi_square_first_digit(const EmpiricalDigitDistribution& emp, const DigitLaw& law,
                                 double alpha) {
  if (law.is_product()) throw UnsupportedError("chi-square test needs a scalar law");
  if (!(law.base() == emp.base())) throw DomainError("law and sample bases differ");
  const int B = emp.base().value();
  if (emp.size() < static_cast<std::size_t>(5 * (B - 1))) {
    throw DomainError("chi-square test needs at least 5 (B - 1) samples");
  }
  const auto probs = first_digit_probs(law);
  const double n = static_cast<double>(emp.size());
  double chi2 = 0.0;
  for (std::size_t d = 0; d < probs.size(); ++d) {
    const double expected = n * probs[d];
    const double observed = static_cast<double>(emp.digit_counts()[d]);
    if (expected <= 0.0) {
      if (observed > 0.0) chi2 = HUGE_VAL;
      continue;
    }
    chi2 += (observed - expected) * (observed - expected) / expected;
  }
  GofReport r;
  r.test = "chi2-first-digit";
  r.statistic = chi2;
  r.dof = B - 2;
  r.samples = emp.size();
  r.alpha = alpha;
  if (r.dof >= 1) {
    r.p_approx = chi_square_tail_wilson_hilferty(chi2, r.dof);
    r.critical = chi_square_critical(r.dof, alpha);
    r.pass = chi2 <= r.critical;
  } else {
    // B = 2: a single digit, the statistic is identically zero.
    r.p_approx = 1.0;
    r.critical = 0.0;
    r.pass = true;
  }
  return r;
}

GofReport chi_square_independence(const std::vector<std::vector<std::uint64_t>>& table,
                                  double alpha) {
  if (table.empty() || table.front().empty()) throw DomainError("contingency table is empty");
  const std::size_t cols = table.front().size();
  std::vector<double> row_tot(table.size(), 0.0), col_tot(cols, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i].size() != cols) throw DomainError("contingency table rows differ in length");
    for (std::size_t j = 0; j < cols; ++j) {
      const auto c = static_cast<double>(table[i][j]);
      row_tot[i] += c;
      col_tot[j] += c;
      total += c;
    }
  }
  const auto nonzero = [](const std::vector<double>& v) {
    return static_cast<int>(std::count_if(v.begin(), v.end(), [](double x) { return x > 0; }));
  };
  const int dof = (nonzero(row_tot) - 1) * (nonzero(col_tot) - 1);
  if (dof < 1) throw DomainError("contingency table needs two nonempty rows and columns");
  double chi2 = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (row_tot[i] == 0.0) continue;
    for (std::size_t j = 0; j < cols; ++j) {
      if (col_tot[j] == 0.0) continue;
      const double expected = row_tot[i] * col_tot[j] / total;
      const double diff = static_cast<double>(table[i][j]) - expected;
      chi2 += diff * diff / expected;
    }
  }
  GofReport r;
  r.test = "chi2-independence";
  r.statistic = chi2;
  r.dof = dof;
  r.samples = static_cast<std::size_t>(total);
  r.alpha = alpha;
  r.p_approx = chi_square_tail_wilson_hilferty(chi2, dof);
  r.critical = chi_square_critical(dof, alpha);
  r.pass = chi2 <= r.critical;
  return r;
}

double ks_two_sample_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("two-sample KS needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

DigitHistogram DigitHistogram::from_counts(Base base, std::span<const std::uint64_t> counts) {
  if (counts.size() != static_cast<std::size_t>(base.value() - 1)) {
    throw DomainError("histogram needs B - 1 digit counts");
  }
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  if (total == 0.0) throw DomainError("histogram has no counts");
  DigitHistogram h{base, {}};
  h.probabilities.reserve(counts.size());
  for (auto c : counts) h.probabilities.push_back(static_cast<double>(c) / total);
  return h;
}

DigitHistogram DigitHistogram::from_empirical(const EmpiricalDigitDistribution& emp) {
  return from_counts(emp.base(), emp.digit_counts());
}

DigitHistogram DigitHistogram::from_law(const DigitLaw& law) {
  return {law.base(), first_digit_probs(law)};
}

double tv_distance(const DigitHistogram& h1, const DigitHistogram& h2) {
  if (!(h1.base == h2.base)) throw DomainError("histogram bases differ");
  if (h1.probabilities.size() != h2.probabilities.size()) {
    throw DomainError("histogram sizes differ");
  }
  double sum = 0.0;
  for (std::size_t d = 0; d < h1.probabilities.size(); ++d) {
    sum += std::fabs(h1.probabilities[d] - h2.probabilities[d]);
  }
  return std::min(0.5 * sum, 1.0);
}

}  // namespace haardigits
