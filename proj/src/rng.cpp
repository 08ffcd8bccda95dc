#include "uqdesk/rng.hpp"

namespace uqdesk {

RngSeed RngSeed::child(std::uint64_t tag) const noexcept {
  return {seed, mix64(stream_id ^ mix64(tag + 0x632be59bd9b4e019ULL))};
}

CounterRng::CounterRng(RngSeed s) noexcept
    : key_(mix64(s.seed ^ mix64(s.stream_id + 0x9e3779b97f4a7c15ULL))) {}

std::uint64_t CounterRng::below(std::uint64_t bound) noexcept {
  auto x = next_u64();
  auto m = static_cast<unsigned __int128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = next_u64();
      m = static_cast<unsigned __int128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace uqdesk
