#include "haardigits/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "haardigits/errors.hpp"

namespace haardigits {

void WindowSpec::validate() const {
  if (!(eps > 0.0)) throw DomainError("window eps must be > 0");
  if (m < 1) throw DomainError("window must span m >= 1 decades");
}

namespace {

void check_size(std::int64_t n) {
  if (n < 1) throw DomainError("size n must be >= 1");
}

}  // namespace

std::vector<double> sample_sphere(std::int64_t n, RngStream& rng) {
  check_size(n);
  std::vector<double> x(static_cast<std::size_t>(n + 1));
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (auto& v : x) {
      v = rng.normal();
      norm2 += v * v;
    }
  } while (norm2 == 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& v : x) v *= inv;
  return x;
}

std::vector<double> sample_sphere_leading(std::int64_t n, int k, RngStream& rng) {
  check_size(n);
  if (k < 1 || k > n + 1) throw DomainError("leading coordinate count must be in [1, n + 1]");
  std::vector<double> x(static_cast<std::size_t>(k));
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (auto& v : x) {
      v = rng.normal();
      norm2 += v * v;
    }
    const std::int64_t rest = n + 1 - k;
    if (rest > 0) norm2 += 2.0 * rng.gamma(0.5 * static_cast<double>(rest));
  } while (norm2 == 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& v : x) v *= inv;
  return x;
}

namespace {

template <class Matrix>
bool well_conditioned(const Matrix& r) {
  const auto diag = r.diagonal().cwiseAbs();
  return diag.minCoeff() > 1e-12 * diag.maxCoeff();
}

}  // namespace

RealMatrix sample_orthogonal_haar(int n, RngStream& rng, std::uint64_t* resamples) {
  check_size(n);
  for (;;) {
    RealMatrix z(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) z(i, j) = rng.normal();
    Eigen::HouseholderQR<RealMatrix> qr(z);
    const RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    if (!well_conditioned(r)) {
      if (resamples) ++*resamples;
      continue;
    }
    RealMatrix q = qr.householderQ();
    for (int j = 0; j < n; ++j) {
      if (r(j, j) < 0) q.col(j) *= -1.0;
    }
    return q;
  }
}

ComplexMatrix sample_unitary_haar(int n, RngStream& rng, std::uint64_t* resamples) {
  check_size(n);
  for (;;) {
    ComplexMatrix z(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double re = rng.normal();
        const double im = rng.normal();
        z(i, j) = {re, im};
      }
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    if (!well_conditioned(r)) {
      if (resamples) ++*resamples;
      continue;
    }
    ComplexMatrix q = qr.householderQ();
    for (int j = 0; j < n; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
    return q;
  }
}

double sample_log_uniform(Base base, int m, RngStream& rng) {
  if (m < 1) throw DomainError("window must span m >= 1 decades");
  return std::exp(static_cast<double>(m) * rng.uniform() * base.log());
}

double sample_power_density(Base base, double k, int m, RngStream& rng) {
  if (!(k > 0.0)) throw DomainError("power density exponent k must be > 0");
  if (m < 1) throw DomainError("window must span m >= 1 decades");
  if (k == 1.0) return sample_log_uniform(base, m, rng);
  // F(x) = expm1(t ln x) / expm1(t m ln B) with t = 1 - k.
  const double t = 1.0 - k;
  const double u = rng.uniform();
  const double x = std::exp(std::log1p(u * std::expm1(t * static_cast<double>(m) * base.log())) / t);
  // Rounding at u -> 1 can land exactly on B^m.
  const double top = std::pow(base.as_double(), static_cast<double>(m));
  return x >= top ? std::nextafter(top, 0.0) : std::max(x, 1.0);
}

RealMatrix sample_upper_triangular_window(int n, Base base, const WindowSpec& window,
                                          HaarSide side, RngStream& rng) {
  check_size(n);
  window.validate();
  RealMatrix a = RealMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double k = side == HaarSide::left ? i + 1 : n - i;
    a(i, i) = sample_power_density(base, k, window.m, rng);
    for (int j = i + 1; j < n; ++j) a(i, j) = rng.uniform(-window.eps, window.eps);
  }
  return a;
}

DigitLaw upper_triangular_component_law(int n, Base base, HaarSide side, int i, int j) {
  check_size(n);
  if (i < 0 || j < 0 || i >= n || j >= n) throw DomainError("entry index out of range");
  if (i > j) throw DomainError("entries below the diagonal are identically zero");
  if (i < j) return DigitLaw::uniform(base);
  const double k = side == HaarSide::left ? i + 1 : n - i;
  return DigitLaw::for_density_exponent(base, k);
}

RealMatrix sample_diagonal_window(int n, Base base, int m, bool det_one, RngStream& rng,
                                  bool random_signs) {
  check_size(n);
  RealMatrix d = RealMatrix::Zero(n, n);
  const int free = det_one ? n - 1 : n;
  double log_prod = 0.0;
  int sign_prod = 1;
  for (int i = 0; i < free; ++i) {
    const double v = sample_log_uniform(base, m, rng);
    log_prod += std::log(v);
    int sign = 1;
    if (random_signs && (rng.next_u64() >> 63)) sign = -1;
    sign_prod *= sign;
    d(i, i) = sign * v;
  }
  if (det_one) d(n - 1, n - 1) = sign_prod * std::exp(-log_prod);
  return d;
}

RealMatrix nilpotent_exp(const RealMatrix& nilpotent) {
  const auto n = nilpotent.rows();
  if (n < 1 || nilpotent.cols() != n) throw DomainError("nilpotent_exp needs a square matrix");
  const bool strictly_lower = nilpotent.triangularView<Eigen::Upper>().toDenseMatrix().isZero(0.0);
  const bool strictly_upper = nilpotent.triangularView<Eigen::Lower>().toDenseMatrix().isZero(0.0);
  if (!strictly_lower && !strictly_upper) {
    throw DomainError("nilpotent_exp requires a strictly triangular matrix");
  }
  RealMatrix result = RealMatrix::Identity(n, n);
  RealMatrix term = RealMatrix::Identity(n, n);
  for (Eigen::Index p = 1; p < n; ++p) {
    term = term * nilpotent / static_cast<double>(p);
    result += term;
  }
  return result;
}

SlnSample sample_sln_lud_window(int n, Base base, const WindowSpec& window, RngStream& rng) {
  check_size(n);
  window.validate();
  SlnSample s;
  s.lower_log = RealMatrix::Zero(n, n);
  s.upper_log = RealMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) s.lower_log(i, j) = rng.uniform(-window.eps, window.eps);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) s.upper_log(i, j) = rng.uniform(-window.eps, window.eps);
  s.diagonal = sample_diagonal_window(n, base, window.m, true, rng);
  s.g = nilpotent_exp(s.lower_log) * nilpotent_exp(s.upper_log) * s.diagonal;
  return s;
}

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (int v : images_) {
    if (v < 0 || v >= size() || seen[static_cast<std::size_t>(v)]) {
      throw DomainError("not a permutation of {0..n-1}");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return Permutation(std::move(v));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(images_.size());
  for (int j = 0; j < size(); ++j) inv[static_cast<std::size_t>(images_[static_cast<std::size_t>(j)])] = j;
  return Permutation(std::move(inv));
}

int Permutation::sign() const {
  std::vector<bool> visited(images_.size(), false);
  int sign = 1;
  for (int start = 0; start < size(); ++start) {
    if (visited[static_cast<std::size_t>(start)]) continue;
    int len = 0;
    for (int j = start; !visited[static_cast<std::size_t>(j)]; j = (*this)(j)) {
      visited[static_cast<std::size_t>(j)] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

RealMatrix Permutation::matrix() const {
  RealMatrix p = RealMatrix::Zero(size(), size());
  for (int j = 0; j < size(); ++j) p((*this)(j), j) = 1.0;
  return p;
}

Permutation random_even_permutation(int n, RngStream& rng) {
  check_size(n);
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i + 1)));
    std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
  }
  Permutation p(v);
  // Composing with a fixed transposition maps odd permutations onto A_n bijectively.
  if (p.sign() < 0) {
    std::swap(v[0], v[1]);
    p = Permutation(std::move(v));
  }
  return p;
}

RealMatrix apply_even_permutations(const RealMatrix& a, const Permutation& p,
                                   const Permutation& q, bool enforce_sl) {
  if (a.rows() != a.cols() || p.size() != a.rows() || q.size() != a.rows()) {
    throw DomainError("permutation sizes must match the square matrix");
  }
  if (enforce_sl && (p.sign() < 0 || q.sign() < 0)) {
    throw DomainError("odd permutation is not in SL_n");
  }
  const Permutation p_inv = p.inverse();
  RealMatrix out(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(i, j) = a(p_inv(i), q(j));
  return out;
}

GlnSample sample_gln_pos_window(int n, Base base, int m, const WindowSpec& window,
                                RngStream& rng) {
  check_size(n);
  const double r = sample_log_uniform(base, m, rng);
  if (n == 1) return {RealMatrix::Constant(1, 1, r), r};
  const SlnSample y = sample_sln_lud_window(n, base, window, rng);
  return {std::pow(r, 1.0 / n) * y.g, r};
}

std::vector<double> draw_parallel(std::uint64_t seed, int workers, std::size_t count,
                                  const std::function<double(RngStream&)>& draw) {
  if (workers < 1) throw DomainError("workers must be >= 1");
  std::vector<double> out(count);
  const auto w = static_cast<std::size_t>(workers);
  auto block = [&](std::size_t id) {
    const std::size_t begin = id * (count / w) + std::min(id, count % w);
    const std::size_t len = count / w + (id < count % w ? 1 : 0);
    RngStream rng(seed, id);
    for (std::size_t i = begin; i < begin + len; ++i) out[i] = draw(rng);
  };
  if (workers == 1) {
    block(0);
    return out;
  }
  {
    std::vector<std::jthread> threads;
    threads.reserve(w);
    for (std::size_t id = 0; id < w; ++id) threads.emplace_back(block, id);
  }
  return out;
}

}  // namespace haardigits
