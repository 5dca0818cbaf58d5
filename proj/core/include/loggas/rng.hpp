#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace loggas {

/// Reproducible random stream: xoshiro256** seeded from (seed) by splitmix64,
/// then advanced by `stream_id` jumps of 2^128 draws, so distinct stream ids
/// of one seed never overlap. Satisfies UniformRandomBitGenerator.
///
/// Single-owner: one stream per chain.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Standard normal (polar Box-Muller, cached second deviate).
  double normal();
  /// Gamma(shape, 1) via Marsaglia-Tsang.
  double gamma(double shape);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  void jump();

  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace loggas
