#pragma once

#include <cstdint>
#include <random>

namespace spinbath {

/// Derives a decorrelated 64-bit sub-seed for stream `stream` of a master
/// seed. This is the splitmix64 output function applied to the stream's
/// state; it is a pure function of (seed, stream), so parallel callers can
/// seed their own generators without coordinating.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Uniform double in [0, 1) using the top 53 bits of the engine output.
/// The mapping is pinned here (rather than std::uniform_real_distribution)
/// so sampled values are identical across standard library versions.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace spinbath
