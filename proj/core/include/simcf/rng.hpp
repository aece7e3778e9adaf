#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string_view>

namespace simcf {

/// Counter-based pseudo-random stream (Philox4x32-10).
///
/// Streams are identified by (seed, trial, purpose tag, sub-stream index) and
/// are independent of each other and of evaluation order, so any draw is
/// reproducible regardless of how work is scheduled across threads.  The seed
/// forms the Philox key; trial/tag/sub are mixed into the 64-bit stream half
/// of the 128-bit counter and the block index occupies the other half.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t trial, std::string_view tag,
            std::uint64_t sub = 0);

  /// Derived stream with the same seed/trial/tag lineage; deterministic and
  /// independent of draws already made from the parent.
  [[nodiscard]] RngStream child(std::uint64_t sub) const;

  /// Next 64 uniformly random bits.
  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double();

  /// Uniform double in [lo, hi).
  double next_uniform(double lo, double hi);

  /// Standard normal draw (Box-Muller; second value of each pair is cached).
  double next_normal();

  /// Circularly-symmetric complex normal draw with unit variance,
  /// i.e. real and imaginary parts are independent N(0, 1/2).
  std::complex<double> next_cnormal();

  // UniformRandomBitGenerator interface.
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~std::uint64_t{0}; }
  result_type operator()() { return next_u64(); }

  /// One raw Philox4x32-10 block (exposed for known-answer tests).
  static std::array<std::uint32_t, 4> philox4x32_10(
      const std::array<std::uint32_t, 4>& counter,
      const std::array<std::uint32_t, 2>& key);

 private:
  struct Raw {};
  RngStream(std::uint64_t key, std::uint64_t stream_id, Raw);

  std::uint64_t key_;        // Philox key (two 32-bit words).
  std::uint64_t stream_id_;  // high 64 bits of the 128-bit counter
  std::uint64_t block_ = 0;  // low 64 bits of the 128-bit counter
  std::uint32_t out_[4] = {0, 0, 0, 0};
  int out_pos_ = 4;          // consumed 32-bit words of the current block
  bool have_cached_normal_ = false;
  double cached_normal_ = 0.0;

  void refill();
};

/// 64-bit FNV-1a hash of a byte string (used for purpose tags).
std::uint64_t fnv1a64(std::string_view s);

/// SplitMix64 finalizer; good 64-bit mixing for stream-id derivation.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace simcf
