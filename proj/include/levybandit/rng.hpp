#pragma once

#include <cstdint>
#include <random>

namespace levybandit {

/// splitmix64 step; the standard 64-bit finalizer-based generator.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Deterministic per-stream engine keyed by (seed, id1, id2).  The same key
/// yields the same draw sequence regardless of worker count or call order,
/// which is the reproducibility contract for all Monte Carlo work here.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t id1,
                                   std::uint64_t id2 = 0) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s ^= 0x9E3779B97F4A7C15ULL * (id1 + 1);
    std::uint64_t b = splitmix64(s);
    s ^= 0xC2B2AE3D27D4EB4FULL * (id2 + 1);
    std::uint64_t c = splitmix64(s);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace levybandit
