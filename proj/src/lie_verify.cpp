#include "haardigits/lie_verify.hpp"

#include <cmath>
#include <stdexcept>

#include "haardigits/errors.hpp"

namespace haardigits {

namespace {

void check_diagonal(const RealMatrix& d) {
  if (d.rows() != d.cols() || d.rows() < 1) throw DomainError("d must be a square matrix");
  for (int i = 0; i < d.rows(); ++i) {
    for (int j = 0; j < d.cols(); ++j) {
      if (i != j && d(i, j) != 0.0) throw DomainError("d must be diagonal");
    }
    if (d(i, i) == 0.0 || !std::isfinite(d(i, i))) throw DomainError("d must be invertible");
  }
}

void check_unit_upper(const RealMatrix& u) {
  for (int i = 0; i < u.rows(); ++i) {
    if (std::fabs(u(i, i) - 1.0) > 1e-12) throw DomainError("u must have unit diagonal");
    for (int j = 0; j < i; ++j) {
      if (u(i, j) != 0.0) throw DomainError("u must be upper triangular");
    }
  }
}

RestrictedAdjoint conjugation_matrix(const RealMatrix& g, const RealMatrix& g_inv,
                                     std::vector<BasisIndex> basis) {
  const auto dim = static_cast<Eigen::Index>(basis.size());
  RealMatrix m = RealMatrix::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const auto [i, j] = basis[static_cast<std::size_t>(col)];
    // g^{-1} E_ij g = (column i of g^{-1}) (row j of g).
    const RealMatrix image = g_inv.col(i) * g.row(j);
    for (Eigen::Index row = 0; row < dim; ++row) {
      const auto [p, q] = basis[static_cast<std::size_t>(row)];
      m(row, col) = image(p, q);
    }
  }
  double below = 0.0;
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < r; ++c) below = std::max(below, std::fabs(m(r, c)));
  return {std::move(m), std::move(basis), below};
}

double determinant(const RealMatrix& m) {
  if (m.rows() == 0) return 1.0;
  return m.partialPivLu().determinant();
}

}  // namespace

std::vector<BasisIndex> upper_algebra_basis(int n) {
  std::vector<BasisIndex> basis;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) basis.emplace_back(i, j);
  return basis;
}

std::vector<BasisIndex> lower_algebra_basis(int n) {
  std::vector<BasisIndex> basis;
  for (int offset = 1; offset < n; ++offset)
    for (int j = 0; j + offset < n; ++j) basis.emplace_back(j + offset, j);
  return basis;
}

RestrictedAdjoint restricted_adjoint_on_u(const RealMatrix& d) {
  check_diagonal(d);
  const RealMatrix d_inv = d.diagonal().cwiseInverse().asDiagonal();
  return conjugation_matrix(d, d_inv, upper_algebra_basis(static_cast<int>(d.rows())));
}

RestrictedAdjoint restricted_adjoint_on_l(const RealMatrix& u, const RealMatrix& d) {
  check_diagonal(d);
  if (u.rows() != d.rows() || u.cols() != d.cols()) throw DomainError("u and d sizes differ");
  check_unit_upper(u);
  const RealMatrix g = u * d;
  // Triangular solve keeps the zeros of the inverse exact.
  const RealMatrix g_inv =
      g.triangularView<Eigen::Upper>().solve(RealMatrix::Identity(g.rows(), g.cols()));
  return conjugation_matrix(g, g_inv, lower_algebra_basis(static_cast<int>(d.rows())));
}

double adjoint_det_on_u(const RealMatrix& d) { return determinant(restricted_adjoint_on_u(d).matrix); }

double adjoint_det_on_u_closed_form(const RealMatrix& d) {
  check_diagonal(d);
  double prod = 1.0;
  for (int i = 0; i < d.rows(); ++i)
    for (int j = i + 1; j < d.rows(); ++j) prod *= d(j, j) / d(i, i);
  return prod;
}

double adjoint_det_on_l(const RealMatrix& u, const RealMatrix& d) {
  const RestrictedAdjoint adj = restricted_adjoint_on_l(u, d);
  const double scale = adj.matrix.cwiseAbs().maxCoeff();
  if (adj.max_below_diagonal > 1e-12 * scale) {
    throw std::logic_error("restricted adjoint on the lower algebra is not triangular");
  }
  return determinant(adj.matrix);
}

double adjoint_det_on_l_closed_form(const RealMatrix& d) {
  check_diagonal(d);
  double prod = 1.0;
  for (int i = 0; i < d.rows(); ++i)
    for (int j = 0; j < i; ++j) prod *= d(j, j) / d(i, i);
  return prod;
}

double hyperbolic_cone_area(double a, double b) {
  if (!(a > 0.0) || !(a <= b)) throw DomainError("hyperbolic cone needs 0 < a <= b");
  return std::log(b / a);
}

MonteCarloEstimate hyperbolic_cone_area_mc(double a, double b, std::uint64_t trials,
                                           RngStream& rng) {
  if (!(a > 0.0) || !(a <= b)) throw DomainError("hyperbolic cone needs 0 < a <= b");
  if (trials == 0) throw DomainError("trials must be >= 1");
  const double box = b / a;
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const double p = rng.uniform() * b;
    const double q = rng.uniform() / a;
    if (q > 0.0 && p * q <= 1.0 && p >= a * a * q && p <= b * b * q) ++hits;
  }
  const double frac = static_cast<double>(hits) / static_cast<double>(trials);
  return {box * frac, box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(trials)), trials};
}

void ConeProblem::validate() const {
  if (!(x_max > 1.0)) throw DomainError("cone problem needs x_max > 1");
  if (!(eps > 0.0)) throw DomainError("cone problem needs eps > 0");
  if (!(eps < 1.0)) throw DomainError("cone problem needs eps < 1 so that (1 - bc)/a > 0");
}

double ConeVolumeTerms::total() const {
  return solid + face_a_low + face_a_high + face_b_low + face_b_high + face_c_low + face_c_high;
}

ConeVolumeTerms sl2_cone_volume_terms(const ConeProblem& problem, double x) {
  problem.validate();
  if (!(x > 1.0 && x <= problem.x_max)) throw DomainError("cone volume needs 1 < x <= x_max");
  const double e = problem.eps;
  const double log_x = std::log(x);
  // Over the square [-e, e]^2: int 1 = 4e^2, int bc = 0; over [-e, e]: int c = 0.
  const double square_of_one_minus_bc = 4.0 * e * e;
  const double line_of_one_plus_ec = 2.0 * e;

  ConeVolumeTerms t{};
  t.solid = log_x * square_of_one_minus_bc;
  t.face_a_low = 0.25 * square_of_one_minus_bc;
  t.face_a_high = -(x / 4.0) * (square_of_one_minus_bc / x);
  t.face_b_low = -(e / 4.0) * line_of_one_plus_ec * log_x;
  t.face_b_high = -(e / 4.0) * line_of_one_plus_ec * log_x;
  t.face_c_low = -(e / 4.0) * line_of_one_plus_ec * log_x;
  t.face_c_high = -(e / 4.0) * line_of_one_plus_ec * log_x;
  return t;
}

double sl2_cone_volume(const ConeProblem& problem, double x) {
  return sl2_cone_volume_terms(problem, x).total();
}

double sl2_cone_coefficient(const ConeProblem& problem) {
  return sl2_cone_volume(problem, problem.x_max) / std::log(problem.x_max);
}

double sl2_cone_cdf(const ConeProblem& problem, double x) {
  problem.validate();
  const double B = problem.base.as_double();
  if (problem.x_max < B) throw DomainError("cone CDF needs x_max >= B");
  if (x == 1.0) return 0.0;
  if (!(x > 1.0 && x <= B)) throw DomainError("cone CDF needs 1 <= x <= B");
  return sl2_cone_volume(problem, x) / sl2_cone_volume(problem, B);
}

MonteCarloEstimate sl2_cone_volume_mc(const ConeProblem& problem, double x,
                                      std::uint64_t trials, RngStream& rng) {
  problem.validate();
  if (!(x > 1.0 && x <= problem.x_max)) throw DomainError("cone volume needs 1 < x <= x_max");
  if (trials == 0) throw DomainError("trials must be >= 1");
  const double e = problem.eps;
  const double z_max = 1.0 + e * e;
  const double box = x * (2.0 * e) * (2.0 * e) * z_max;
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const double w = rng.uniform() * x;
    const double y1 = rng.uniform(-e, e);
    const double y2 = rng.uniform(-e, e);
    const double z = rng.uniform() * z_max;
    const double delta = w * z - y1 * y2;
    if (!(delta > 0.0 && delta <= 1.0)) continue;
    const double t = std::sqrt(delta);
    const double a = w / t;
    if (a >= 1.0 && a < x && std::fabs(y1 / t) <= e && std::fabs(y2 / t) <= e) ++hits;
  }
  const double frac = static_cast<double>(hits) / static_cast<double>(trials);
  return {box * frac, box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(trials)), trials};
}

}  // namespace haardigits
