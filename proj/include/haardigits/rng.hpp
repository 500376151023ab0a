#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace haardigits {

// Deterministic, splittable random stream.
//
// Generator: xoshiro256** (Blackman & Vigna). The four state words are the
// first four outputs of SplitMix64 started from
//     mix64(seed) ^ mix64(stream_id + 0x9E3779B97F4A7C15)
// where mix64 is the SplitMix64 finalizer. Doubles take the top 53 bits of
// each output times 2^-53; normals come from the Marsaglia polar method with
// the second variate of each accepted pair cached. The integer and uniform
// sequences are fixed by (seed, stream_id) on every platform; normal and gamma
// variates additionally depend on the platform's std::log.
//
// A stream must not be used from two threads at once; give each worker its own
// stream_id.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return next_u64(); }
  std::uint64_t next_u64();

  // Uniform on [0, 1).
  double uniform();
  // Uniform on (0, 1).
  double uniform_open();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer on [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n);
  double normal();
  // Gamma(shape, 1) variate, shape > 0 (Marsaglia-Tsang).
  double gamma(double shape);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

 private:
  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

std::uint64_t splitmix64_mix(std::uint64_t z);

}  // namespace haardigits
