#pragma once

#include <cstdint>

// Counter-based pseudo-random generator. Each (seed, stream) pair names an
// independent stream; the i-th draw is a pure function of (seed, stream, i),
// so results do not depend on thread scheduling or call interleaving across
// streams.

namespace scoredecomp {

/// SplitMix64 finalizer; bijective mixing of a 64-bit word.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix64(mix64(seed) ^ (0x6a09e667f3bcc909ULL + stream))) {}

    std::uint64_t next_u64() { return mix64(key_ ^ mix64(counter_++)); }

    /// Uniform double in the open interval (0, 1).
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; consumes exactly two uniforms per pair.
    double next_normal();

    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n);

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace scoredecomp
