#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "haardigits/digit_law.hpp"
#include "haardigits/rng.hpp"
#include "haardigits/significand.hpp"

namespace haardigits {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

// Sampling window for noncompact groups: unipotent coordinates are uniform on
// [-eps, eps]; diagonal/radial coordinates live on m base-B decades [1, B^m).
struct WindowSpec {
  double eps = 0.1;
  int m = 3;

  void validate() const;
};

enum class HaarSide { left, right };

// Uniform point on S^n (n + 1 coordinates), by normalizing a Gaussian vector.
std::vector<double> sample_sphere(std::int64_t n, RngStream& rng);

// First k coordinates of a uniform point on S^n, drawn exactly without the
// remaining n + 1 - k Gaussians: their squared norm is a chi-square variate.
std::vector<double> sample_sphere_leading(std::int64_t n, int k, RngStream& rng);

// Haar-distributed orthogonal / unitary matrices: QR of a Gaussian matrix with
// the columns of Q rescaled by the phases of diag(R). A numerically singular
// draw is discarded; `resamples` (if given) is incremented per discard.
RealMatrix sample_orthogonal_haar(int n, RngStream& rng, std::uint64_t* resamples = nullptr);
ComplexMatrix sample_unitary_haar(int n, RngStream& rng, std::uint64_t* resamples = nullptr);

// Density 1/x on [1, B^m).
double sample_log_uniform(Base base, int m, RngStream& rng);

// Density x^{-k} on [1, B^m), by inverting the CDF. Throws DomainError if k <= 0.
double sample_power_density(Base base, double k, int m, RngStream& rng);

// Upper triangular matrix from the window of the left (density prod a_kk^{-k})
// or right (density prod a_kk^{-(n-k+1)}) Haar measure. Diagonal entries lie in
// [1, B^m); entries above the diagonal are uniform on [-eps, eps].
RealMatrix sample_upper_triangular_window(int n, Base base, const WindowSpec& window,
                                          HaarSide side, RngStream& rng);

// Predicted significand law of entry (i, j), 0-based, i <= j, of the sampler
// above. Off-diagonal entries follow UniformSig exactly when eps is an integer
// power of B.
DigitLaw upper_triangular_component_law(int n, Base base, HaarSide side, int i, int j);

// Diagonal matrix with log-uniform entries on [1, B^m). With det_one the last
// entry is 1 / (product of the others). random_signs attaches independent
// Rademacher signs (det_one keeps the determinant at +1).
RealMatrix sample_diagonal_window(int n, Base base, int m, bool det_one, RngStream& rng,
                                  bool random_signs = false);

// exp(N) for strictly lower or strictly upper triangular N: the terminating
// series I + N + ... + N^{n-1}/(n-1)!. Throws DomainError for other input.
RealMatrix nilpotent_exp(const RealMatrix& nilpotent);

struct SlnSample {
  RealMatrix lower_log;  // X, strictly lower
  RealMatrix upper_log;  // Y, strictly upper
  RealMatrix diagonal;   // d, determinant one
  RealMatrix g;          // exp(X) exp(Y) d
};

// SL_n window in LUD coordinates: X, Y uniform on the eps-box, d from the
// determinant-one diagonal window.
SlnSample sample_sln_lud_window(int n, Base base, const WindowSpec& window, RngStream& rng);

// Permutation sigma of {0..n-1}; its matrix P has P(sigma(j), j) = 1, so
// (P A)(i, j) = A(sigma^{-1}(i), j) and (A Q)(i, j) = A(i, tau(j)).
class Permutation {
 public:
  explicit Permutation(std::vector<int> images);
  static Permutation identity(int n);

  int size() const noexcept { return static_cast<int>(images_.size()); }
  int operator()(int j) const { return images_.at(static_cast<std::size_t>(j)); }
  Permutation inverse() const;
  int sign() const;
  RealMatrix matrix() const;
  const std::vector<int>& images() const noexcept { return images_; }

 private:
  std::vector<int> images_;
};

// Uniform on the alternating group A_n.
Permutation random_even_permutation(int n, RngStream& rng);

// P A Q. The diagonal of the result is A(sigma^{-1}(i), tau(i)). With
// enforce_sl an odd P or Q throws DomainError.
RealMatrix apply_even_permutations(const RealMatrix& a, const Permutation& p,
                                   const Permutation& q, bool enforce_sl = true);

struct GlnSample {
  RealMatrix g;
  double r;  // det(g), log-uniform on [1, B^m)
};

// GL_n^+ through R^+ x SL_n: g = r^{1/n} y.
GlnSample sample_gln_pos_window(int n, Base base, int m, const WindowSpec& window,
                                RngStream& rng);

// N draws split over `workers` streams RngStream(seed, w); worker w produces a
// contiguous block and blocks are concatenated in worker order, so the result
// depends only on (seed, workers, N).
std::vector<double> draw_parallel(std::uint64_t seed, int workers, std::size_t count,
                                  const std::function<double(RngStream&)>& draw);

}  // namespace haardigits
