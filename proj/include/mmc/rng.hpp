#pragma once

// Seedable RNG plumbing. Every sampling operation takes an explicit
// generator so experiments replay from a recorded seed.
//
// Stream derivation: stream k of root seed s is mt19937_64 seeded with
// splitmix64(s + (k+1) * 0x9E3779B97F4A7C15). Monte-Carlo drivers use one
// stream per trial, which makes merged histograms independent of how trials
// are partitioned across workers.

#include <cstdint>
#include <random>

namespace mmc {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_stream_seed(std::uint64_t root_seed, std::uint64_t stream) {
    return splitmix64(root_seed + (stream + 1) * 0x9E3779B97F4A7C15ull);
}

inline Rng derive_rng(std::uint64_t root_seed, std::uint64_t stream) {
    return Rng(derive_stream_seed(root_seed, stream));
}

// Exactly uniform residue in [0, q) by rejection on the top of the 64-bit
// output stream.
inline std::uint32_t uniform_residue(Rng& rng, std::uint32_t q) {
    if (q == 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % q;
    std::uint64_t x;
    do { x = rng(); } while (x >= limit);
    return static_cast<std::uint32_t>(x % q);
}

// Canonical double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace mmc
