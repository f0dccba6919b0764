#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace pasql {

/**
 * Counter-based pseudo random generator built on the splitmix64 finalizer.
 *
 * The i-th output of a generator with key (seed, stream) is
 *
 *     out(i) = mix(base + (i + 1) * GOLDEN)
 *     base   = mix(seed + GOLDEN) ^ mix(stream * GOLDEN + FOLD)
 *
 * where mix is the splitmix64 finalizer and GOLDEN = 2^64 / phi.  Outputs are
 * a pure function of (seed, stream, counter), so traces are bitwise
 * reproducible across platforms and two generators with different streams
 * never share a counter sequence.
 *
 * Stream ids used by this library: kEnvStream drives environment transitions,
 * kPolicyStream drives behavior-policy action draws.
 */
class CounterRng {
 public:
  static constexpr std::uint64_t kEnvStream = 1;
  static constexpr std::uint64_t kPolicyStream = 2;

  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : base_(mix(seed + kGolden) ^ mix(stream * kGolden + kFold)) {}

  /// Output at an explicit counter value, independent of internal state.
  std::uint64_t at(std::uint64_t counter) const {
    return mix(base_ + (counter + 1) * kGolden);
  }

  std::uint64_t next_u64() { return at(counter_++); }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Index sampled from the categorical distribution given by cumulative
  /// weights cum[0] <= cum[1] <= ... <= cum[n-1], where cum[n-1] is the total
  /// mass.  Returns the first i with u * total < cum[i].
  int sample_cumulative(const std::vector<double>& cum) {
    if (cum.empty()) throw std::invalid_argument("sample_cumulative: empty support");
    const double u = next_double() * cum.back();
    int lo = 0, hi = static_cast<int>(cum.size()) - 1;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (u < cum[mid]) hi = mid; else lo = mid + 1;
    }
    return lo;
  }

  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kFold = 0xBF58476D1CE4E5B9ull;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace pasql
