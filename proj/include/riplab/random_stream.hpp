#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace riplab {

namespace detail {

/// One Philox4x32-10 block: 128-bit counter + 64-bit key -> 128 random bits.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key);

/// SplitMix64 finalizer; bijective 64-bit mix.
std::uint64_t mix64(std::uint64_t z);

}  // namespace detail

/// Splittable counter-based random stream.
///
/// A stream is identified by a 128-bit id derived from (master_seed, path),
/// where the path is the sequence of child() indices taken from the root.
/// Output blocks come from Philox4x32-10 keyed by the id, so equal
/// (seed, path) give identical sequences and distinct paths give
/// statistically independent ones.  child() is a pure function of the id:
/// it neither consumes from nor perturbs the parent, which makes trial-level
/// parallelism reproducible at any worker count.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t master_seed);

  /// Stream for the path extended by `index`.  Distinct indices give
  /// independent streams; the parent is left untouched.
  RandomStream child(std::uint64_t index) const;

  /// Convenience: child(i0).child(i1)...
  RandomStream descend(const std::vector<std::uint64_t>& indices) const;

  std::uint64_t next_u64();

  /// Uniform on [0,1), 53-bit resolution.
  double next_unit();
  /// Uniform on (0,1]; safe as a log() argument.
  double next_unit_open();
  /// Uniform on [-1,1).
  double next_symmetric();
  /// Standard normal (Box-Muller, pairs cached per stream).
  double next_gaussian();
  /// Exponential with rate 1.
  double next_exponential();
  /// Uniformly random sign, +1.0 or -1.0.
  double next_sign();
  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t next_below(std::uint64_t bound);

  /// m distinct indices drawn uniformly from {0,...,n-1}, returned sorted.
  std::vector<int> sample_subset(int n, int m);

 private:
  RandomStream(std::uint64_t id_lo, std::uint64_t id_hi);

  std::array<std::uint32_t, 4> generate_block();

  std::uint64_t id_lo_;
  std::uint64_t id_hi_;
  std::uint64_t block_counter_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double gaussian_spare_ = 0.0;
  bool have_gaussian_spare_ = false;
};

}  // namespace riplab
