#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace behent {

namespace detail {
// SplitMix64 finalizer; full avalanche, so consecutive counters give
// statistically independent outputs.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}
} // namespace detail

// Counter-based generator: output i is a pure function of (seed, stream, i),
// so substreams indexed by repetition or increment reproduce identically no
// matter how work is scheduled across threads.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {
    key_ = detail::mix64(detail::mix64(seed + kGolden) ^ detail::mix64(stream + kGolden2));
  }

  // Independent generator for the same seed; used one level deep (repetition
  // r, increment j) with distinct stream ids.
  CounterRng substream(std::uint64_t stream) const {
    return CounterRng(seed_, detail::mix64(stream_ + kGolden2 * (stream + 1)));
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return detail::mix64(key_ + kGolden * ++ctr_); }

  // [0, 1), 53-bit resolution
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased integer in [0, bound) by rejection from the top of the range.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Standard normal via Box-Muller; u1 drawn from (0, 1] so the log is finite.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kGolden2 = 0xd1b54a32d192ed03ULL;

  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  std::uint64_t key_ = 0;
  std::uint64_t ctr_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace behent
