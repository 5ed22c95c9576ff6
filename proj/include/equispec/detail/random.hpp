#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace equispec::detail {

/// Uniform integer in [0, n). Hand-rolled rejection sampling so that a fixed
/// seed yields the same graphs on every standard library (the distributions
/// in <random> are implementation-defined).
inline std::uint64_t random_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

template <typename T>
void shuffle(std::vector<T>& values, std::mt19937_64& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        std::swap(values[i - 1], values[random_below(rng, i)]);
    }
}

/// Decorrelated per-sample generator for ensemble runs.
inline std::mt19937_64 stream_rng(std::uint64_t base_seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(base_seed),
                      static_cast<std::uint32_t>(base_seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace equispec::detail
