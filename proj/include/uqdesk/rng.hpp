#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <utility>

namespace uqdesk {

// (seed, stream_id) pair. Consumers that need many independent streams
// derive children with `child()` instead of advancing a shared generator, so
// results do not depend on evaluation order.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  RngSeed child(std::uint64_t tag) const noexcept;
  RngSeed child(std::uint64_t a, std::uint64_t b) const noexcept {
    return child(a).child(b);
  }

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based generator: the k-th output is a pure function of
// (seed, stream_id, k). All arithmetic is integer or IEEE basic operations
// except the normal draw, which goes through log/sqrt/cos.
class CounterRng {
 public:
  explicit CounterRng(RngSeed s) noexcept;

  std::uint64_t next_u64() noexcept {
    return mix64(key_ + (++counter_) * kGolden);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }

  // Unbiased integer in [0, bound), bound > 0 (Lemire's method).
  std::uint64_t below(std::uint64_t bound) noexcept;

  // Standard normal via Box-Muller; no cached second variate so that every
  // draw costs exactly two counter steps.
  double normal() noexcept {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Fisher-Yates shuffle driven by CounterRng (std::shuffle's algorithm is
// implementation-defined, which would break cross-platform reproducibility).
template <typename T>
void shuffle(std::span<T> values, CounterRng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    using std::swap;
    swap(values[i - 1], values[j]);
  }
}

}  // namespace uqdesk
