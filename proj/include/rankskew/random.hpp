#pragma once

#include <cstdint>
#include <random>

namespace rankskew {

/// Seeded engine used by every randomized operation. The standard library
/// distributions are implementation-defined, so draws go through the
/// helpers below, which depend only on the raw 64-bit engine output.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

/// Purpose of a random stream. Sampling, sign symmetrization and bootstrap
/// resampling draw from separate streams, so reusing one seed across them
/// (e.g. synthesizing and then analyzing with the same --seed) does not
/// correlate their draws.
enum class Stream : std::uint32_t { sampling = 1, symmetrize = 2, bootstrap = 3 };

/// Engine for stream `stream` of `seed`; `index` separates sub-streams
/// such as bootstrap replicates.
inline Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    return Rng{seq};
}

/// Uniform in the open interval (0, 1); never returns an endpoint.
inline double uniform_open(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform integer in [0, n) via the multiply-shift reduction.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    __extension__ using wide = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<wide>(rng()) * n) >> 64);
}

/// Random sign, +1 or -1 with equal probability.
inline double random_sign(Rng& rng) { return (rng() >> 63) ? 1.0 : -1.0; }

}  // namespace rankskew
