#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "haardigits/rng.hpp"
#include "haardigits/samplers.hpp"
#include "haardigits/significand.hpp"

namespace haardigits {

// Index pair (i, j) naming the elementary matrix E_ij (0-based).
using BasisIndex = std::pair<int, int>;

// Basis of the strictly upper triangular algebra, row-major.
std::vector<BasisIndex> upper_algebra_basis(int n);
// Basis of the strictly lower triangular algebra ordered along sub-diagonals:
// first (1,0), (2,1), ..., then (2,0), (3,1), ..., ending with (n-1, 0).
std::vector<BasisIndex> lower_algebra_basis(int n);

// Matrix of X -> g^{-1} X g restricted to a subalgebra and written in its
// basis: column l holds the basis coordinates of g^{-1} E_l g.
struct RestrictedAdjoint {
  RealMatrix matrix;
  std::vector<BasisIndex> basis;
  double max_below_diagonal;  // largest |entry| strictly below the diagonal
};

RestrictedAdjoint restricted_adjoint_on_u(const RealMatrix& d);
RestrictedAdjoint restricted_adjoint_on_l(const RealMatrix& u, const RealMatrix& d);

// det of Ad(d^{-1}) on the upper algebra, from the conjugation matrix.
double adjoint_det_on_u(const RealMatrix& d);
// Closed form prod_{i<j} d_jj / d_ii.
double adjoint_det_on_u_closed_form(const RealMatrix& d);

// det of Ad((u d)^{-1}) on the lower algebra from the conjugation matrix,
// which must be upper triangular in the sub-diagonal ordering (relative
// tolerance 1e-12, std::logic_error otherwise). u unit upper triangular, d
// invertible diagonal.
double adjoint_det_on_l(const RealMatrix& u, const RealMatrix& d);
// Closed form prod_{i>j} d_jj / d_ii (the coefficient of E_ij in d^{-1} E_ij d).
double adjoint_det_on_l_closed_form(const RealMatrix& d);

struct MonteCarloEstimate {
  double value;
  double std_error;
  std::uint64_t trials;
};

// Area of the hyperbolic sector {(t x, t / x) : 0 <= t <= 1, a <= x <= b}
// cut out of the cone over the arc of xy = 1: ln(b / a).
double hyperbolic_cone_area(double a, double b);
// Hit-or-miss estimate of the same area on the box [0, b] x [0, 1/a].
MonteCarloEstimate hyperbolic_cone_area_mc(double a, double b, std::uint64_t trials,
                                           RngStream& rng);

// SL_2 as the graph d = (1 - bc)/a over D = [1, x) x [-eps, eps]^2.
struct ConeProblem {
  double x_max;
  double eps;
  Base base{10};

  void validate() const;
};

// The seven terms whose sum is the 4-volume of the cone from the origin over
// graph(d): the solid under the graph plus the six pyramids on its faces
// (apex at the origin, volume = base * height / 4), each integral evaluated in
// closed form.
struct ConeVolumeTerms {
  double solid;
  double face_a_low;
  double face_a_high;
  double face_b_low;
  double face_b_high;
  double face_c_low;
  double face_c_high;

  double total() const;
};

ConeVolumeTerms sl2_cone_volume_terms(const ConeProblem& problem, double x);
// Cone volume log(x) F(eps); requires 1 < x <= x_max.
double sl2_cone_volume(const ConeProblem& problem, double x);
// F(eps) = volume / log(x).
double sl2_cone_coefficient(const ConeProblem& problem);
// P(S_B(a) < x) = volume(x) / volume(B); x_max must be >= B.
double sl2_cone_cdf(const ConeProblem& problem, double x);

// Rejection estimate of the cone volume: a point p = (w, y1, y2, z) of the
// bounding box [0, x] x [-eps, eps]^2 x [0, 1 + eps^2] is inside iff
// delta = w z - y1 y2 lies in (0, 1] and p / sqrt(delta) projects into D.
MonteCarloEstimate sl2_cone_volume_mc(const ConeProblem& problem, double x,
                                      std::uint64_t trials, RngStream& rng);

}  // namespace haardigits
