#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace pcss {

// Seeded random helpers built directly on the mt19937_64 bit stream.
// std::uniform_real_distribution and friends are implementation-defined,
// so every draw here is spelled out to keep seeded runs byte-reproducible
// across standard libraries.

inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53; // [0, 1)
}

inline double uniform_real(std::mt19937_64& eng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(eng);
}

// Box-Muller, no spare caching.
inline double normal01(std::mt19937_64& eng) {
    double u1 = uniform01(eng);
    while (u1 <= 0.0) u1 = uniform01(eng);
    const double u2 = uniform01(eng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Unbiased integer in [0, n).
inline std::size_t uniform_index(std::mt19937_64& eng, std::size_t n) {
    const std::uint64_t bound = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = eng();
    while (x >= bound) x = eng();
    return static_cast<std::size_t>(x % n);
}

// Fisher-Yates.
template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& eng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[uniform_index(eng, i)]);
    }
}

} // namespace pcss
