#pragma once

#include <cstdint>

namespace spinflow {

/// SplitMix64: tiny, fully specified PRNG so that seeded runs are
/// bit-reproducible across platforms (std:: distributions are not).
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). Modulo bias is ~n/2^64, irrelevant here.
    std::uint32_t below(std::uint32_t n) { return static_cast<std::uint32_t>(next() % n); }
};

/// Stateless mix of a seed with a stream tag; used to derive independent,
/// schedule-invariant RNG streams per (seed, graph, node) cell.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    SplitMix64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (tag + 1)));
    return rng.next();
}

}  // namespace spinflow
