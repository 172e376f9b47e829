#pragma once

#include <cmath>
#include <cstdint>

namespace latsim {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace detail

/// Counter-based keyed random stream (SplitMix64 finalizer over a Weyl
/// sequence). A stream is fully determined by (master_seed, stream_id), so a
/// scenario can hand out one stream per random process: the primary-user
/// chain and each secondary node draw from disjoint streams, and adding a
/// node never perturbs the draws of the others.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : key_(detail::mix64(detail::mix64(master_seed + detail::kGolden) + stream_id)) {}

  std::uint64_t next_u64() { return detail::mix64(key_ + (++counter_) * detail::kGolden); }

  /// Uniform double in [0, 1), 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Exponential with the given mean; mean 0 yields exactly 0.
  double next_exponential(double mean) {
    // 1 - u lies in (2^-53, 1], so the log is always finite.
    return -mean * std::log(1.0 - next_unit());
  }

  bool next_bernoulli(double p) { return next_unit() < p; }

  /// Uniform integer in [0, bound); bound >= 1. Rejection keeps it exact.
  std::uint32_t next_below(std::uint32_t bound) {
    const std::uint64_t span = 0x100000000ull - (0x100000000ull % bound);
    for (;;) {
      const std::uint64_t x = next_u64() >> 32;
      if (x < span) return static_cast<std::uint32_t>(x % bound);
    }
  }

  /// Number of raw draws consumed so far.
  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

// Stream-id layout used by the simulation engine.
inline constexpr std::uint64_t kPuStreamId = 0;
inline constexpr std::uint64_t node_stream_id(std::uint32_t node) { return 1 + node; }

}  // namespace latsim
