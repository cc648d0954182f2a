#pragma once

#include <cstdint>
#include <random>

namespace edgc {

/// Independent 64-bit seed for substream `stream` of `seed` (SplitMix64 mix).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Generator for substream `stream`; results do not depend on how streams are
/// distributed over workers.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream)
{
    return std::mt19937_64(derive_seed(seed, stream));
}

}  // namespace edgc
