#pragma once

#include <cstdint>
#include <random>

namespace sinrcap {

// SplitMix64 step; used to derive independent stream seeds from one root seed.
inline std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of stream `index` under `root`. Independent of the order streams are requested in.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index)
{
    std::uint64_t s = root;
    std::uint64_t a = splitmix64(s);
    s = a ^ (index * 0xd1b54a32d192ed03ULL);
    return splitmix64(s);
}

using Rng = std::mt19937_64;

// Uniform double in [0,1) from the top 53 bits. Kept explicit rather than using
// std::uniform_real_distribution so outputs are identical across standard libraries.
inline double uniform01(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi)
{
    return lo + (hi - lo) * uniform01(rng);
}

} // namespace sinrcap
