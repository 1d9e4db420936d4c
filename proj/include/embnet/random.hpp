#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

// Seeded randomness helpers. All mappings from engine output to values are
// spelled out here instead of using std::*_distribution, whose algorithms are
// implementation-defined; this keeps seeded runs byte-identical across
// standard libraries.

namespace embnet::rng {

using Engine = std::mt19937_64;

// Unbiased integer in [0, bound) by rejection.
inline std::uint64_t uniform_below(Engine& eng, std::uint64_t bound) {
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % bound;
    std::uint64_t x;
    do {
        x = eng();
    } while (x >= limit);
    return x % bound;
}

// Uniform double in [0, 1) with 53 random bits.
inline double unit_uniform(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Engine& eng, double lo, double hi) {
    return lo + (hi - lo) * unit_uniform(eng);
}

// Box-Muller; consumes exactly two engine draws per value.
inline double gaussian(Engine& eng, double mean, double stddev) {
    const double u1 = 1.0 - unit_uniform(eng); // (0, 1]
    const double u2 = unit_uniform(eng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
}

template <typename T>
void shuffle(std::vector<T>& values, Engine& eng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_below(eng, i));
        std::swap(values[i - 1], values[j]);
    }
}

// `count` distinct indices from [0, n), in sampling order.
inline std::vector<std::uint32_t> sample_indices(std::size_t n, std::size_t count, Engine& eng) {
    std::vector<std::uint32_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(uniform_below(eng, n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
}

} // namespace embnet::rng
