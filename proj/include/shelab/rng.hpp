#pragma once

#include <array>
#include <cstdint>

namespace shelab {

/// splitmix64 output mix (bijective on 64-bit words).
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Philox4x32-10 counter-based generator. Pure integer arithmetic, so the
/// uniform stream is identical on every platform; draw i of stream `key` is
/// a pure function of (key, i).
std::array<std::uint64_t, 2> philox4x32_10(std::uint64_t key, std::uint64_t counter);

/// Uniform in the open interval (0,1) from a 64-bit word.
inline double u64_to_unit(std::uint64_t x) {
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

/// Inverse of the standard normal CDF (Wichura's AS 241, PPND16 accuracy).
double normal_icdf(double p);

/// Standard normal draw i of the stream identified by `key`.
double gaussian_draw(std::uint64_t key, std::uint64_t index);

/// Deterministic map from (master seed, path index) to per-path stream
/// seeds: seed_i = splitmix64(master + (i+1) * 0x9E3779B97F4A7C15). The
/// arguments are distinct for distinct indices and splitmix64 is bijective,
/// so streams never collide under one master.
struct SeedLadder {
    std::uint64_t master = 0;
};

std::uint64_t derive_seed(const SeedLadder& ladder, std::uint64_t path_index);

/// Auxiliary stream derived from a path seed (bridge refinements etc).
std::uint64_t derive_substream(std::uint64_t seed, std::uint64_t tag);

} // namespace shelab
