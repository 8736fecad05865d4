#pragma once

#include <cstdint>

namespace grda::num {

/// Counter-based random stream: the k-th output is a fixed 64-bit mix of
/// (seed, stream id, k), so draws depend only on the stream identity and the
/// number of values consumed. Streams can be split deterministically, which
/// keeps parallel fan-out reproducible regardless of worker count.
///
/// Algorithm: SplitMix64-style counter sequence keyed by the stream id through
/// a Stafford mix13 finalizer. Normal variates use the inverse CDF (Acklam's
/// rational approximation with one Halley refinement).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t id) : seed_(seed), id_(id) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t id() const { return id_; }

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal draw (one counter tick).
  double normal();

  /// Uniform integer in [0, n).
  std::uint64_t uniform_below(std::uint64_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t id_;
  std::uint64_t counter_ = 0;
};

/// Deterministic child stream; distinct labels give independent-behaving
/// sequences.
RngStream rng_split(const RngStream& base, std::uint64_t label);

/// Inverse standard normal CDF, absolute error below 1e-9.
double inverse_normal_cdf(double p);

}  // namespace grda::num
