#pragma once

#include <cstdint>
#include <random>

namespace homrot {

/// Which part of a simulation a random stream feeds. Streams from different domains
/// never share a key.
enum class StreamDomain : std::uint64_t {
    DipScan = 1,
    RotationCounts = 2,
    RotationDrift = 3,
    ClassicalPhase = 4,
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Stream key for (master seed, domain, setting, run). Keys depend only on these four
/// values, so records can be generated in any order or in parallel.
inline constexpr std::uint64_t stream_id(std::uint64_t master_seed, StreamDomain domain,
                                         std::uint64_t setting, std::uint64_t run) {
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(domain));
    h = splitmix64(h ^ setting);
    return splitmix64(h ^ (run * 0xD1B54A32D192ED03ULL));
}

inline std::mt19937_64 make_engine(std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace homrot
