#pragma once

#include <cstdint>

// Value-typed counter-based RNG stream. Streams are cheap to copy, never
// shared between threads, and children derived via derive() are
// statistically independent of the parent and of each other.

namespace symlik {

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0) : base_(seed) {
    state_ = mix(seed ^ 0x9e3779b97f4a7c15ull);
    inc_ = mix(seed + 0xda3e39cb94b95bdbull) | 1ull;
  }

  // Child stream keyed by index; derivation uses the original seed, not
  // the current position, so derive(i) is reproducible at any time.
  RngStream derive(std::uint64_t index) const {
    return RngStream(mix(base_ + 0x9e3779b97f4a7c15ull * (index + 1)));
  }

  std::uint64_t seed() const { return base_; }

  std::uint64_t next_u64() {
    std::uint64_t x = state_;
    state_ = state_ * 6364136223846793005ull + inc_;
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdull;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ull;
    x ^= x >> 33;
    return x;
  }

  // Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform01() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Standard normal deviate via inverse-CDF; exact distribution, portable.
  double normal();

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t base_;
  std::uint64_t state_;
  std::uint64_t inc_;
};

}  // namespace symlik
