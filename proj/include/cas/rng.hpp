#pragma once

#include <cstdint>

namespace cas::rng {

// 64-bit avalanche finalizer (splitmix64). Used both as the seed mixer and
// as the counter-based generator behind scrambling and the plain-MC stream,
// so the whole library shares one seeding discipline.
inline constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic derived seed for (stream tag, replicate) pairs.
inline constexpr std::uint64_t derive(std::uint64_t base, std::uint64_t tag,
                                      std::uint64_t index = 0) noexcept {
    return mix64(base ^ mix64(tag ^ mix64(index)));
}

// Stream tags keep replicate draws independent across uses of the same base
// seed. Values are arbitrary but fixed forever.
enum Stream : std::uint64_t {
    kScramble   = 0x53435241u, // per-replicate net scrambling
    kPlainMc    = 0x504c4d43u, // pseudorandom baseline
    kGradients  = 0x47524144u, // C-hat estimation points
    kOracle     = 0x4f52434cu, // test-side oracles
};

// Counter-based uniform stream: pure function of (key, counter).
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    std::uint64_t next_u64() { return mix64(key_ ^ (counter_++ * 0x9e3779b97f4a7c15ULL)); }

    // Uniform on (0,1): 53 random bits at the cell midpoint, never 0 or 1.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace cas::rng
