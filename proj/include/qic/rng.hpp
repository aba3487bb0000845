#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace qic {

/// All dataset generation and parameter initialization draws from mt19937_64
/// through these helpers only, so streams do not depend on the standard
/// library's distribution internals.
using Rng = std::mt19937_64;

/// Validation sets derive their stream from the training seed plus this
/// offset.
inline constexpr std::uint64_t validation_seed_offset = 1000003;

inline bool rand_coin(Rng& rng) { return (rng() >> 63) != 0; }

inline std::uint8_t rand_byte(Rng& rng) { return static_cast<std::uint8_t>(rng() >> 56); }

/// Uniform double in [0, 1) with 53 random bits.
inline double rand_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by masked rejection.
inline std::uint64_t rand_below(Rng& rng, std::uint64_t bound) {
    if (bound <= 1) return 0;
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
        const std::uint64_t r = rng() & mask;
        if (r < bound) return r;
    }
}

template <typename T>
void shuffle_indices(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i)
        std::swap(items[i - 1], items[rand_below(rng, i)]);
}

}  // namespace qic
