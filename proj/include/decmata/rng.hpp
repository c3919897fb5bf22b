#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace decmata {

// Derives independent stream seeds from one mission seed (splitmix64 finalizer).
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 rng_stream(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(split_seed(seed, stream));
}

// Uniform double in [0, hi). Hand-rolled so results do not depend on the
// standard library's distribution implementation.
inline double uniform_double(std::mt19937_64& rng, double hi) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 * hi;
}

// Uniform integer in [0, n), rejection-sampled to avoid modulo bias.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

namespace stream {
// Named sub-streams so different stochastic stages never share raw draws.
inline constexpr std::uint64_t kScenario = 0;
inline constexpr std::uint64_t kFcmInit = 1;
inline constexpr std::uint64_t kInitialAssignment = 2;
}  // namespace stream

}  // namespace decmata
