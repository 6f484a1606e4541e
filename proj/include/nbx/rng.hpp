#pragma once

#include <cstdint>

namespace nbx {

/// Counter-based 64-bit generator (splitmix64). Streams derived from
/// (seed, index) are independent, so parallel and serial Monte Carlo runs
/// produce identical estimates.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, bound). bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    // Rejection-free multiply-shift; bias is < 2^-32 for the small bounds
    // used here (node degrees, sample counts).
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  /// Uniform double in [0, 1).
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [-s, s].
  double next_symmetric(double s) { return (2.0 * next_double() - 1.0) * s; }

 private:
  std::uint64_t state_;
};

/// Stream seed for the idx-th substream of a master seed.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t idx) {
  SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ull * (idx + 1)));
  return g.next();
}

}  // namespace nbx
