#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace speclocal {

// std::mt19937_64 output is pinned by the standard, but the distribution
// adaptors are not; these helpers keep sampled values identical across
// standard libraries.

inline double uniform_unit(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53; // [0, 1)
}

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(rng);
}

/// Uniform integer in [lo, hi], inclusive.
inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    const std::uint64_t span = std::uint64_t(hi - lo) + 1;
    return lo + int(rng() % span);
}

/// Box-Muller standard normal (one value per call, second discarded).
inline double normal_unit(std::mt19937_64& rng) {
    double u1 = uniform_unit(rng);
    const double u2 = uniform_unit(rng);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(6.283185307179586476925286766559 * u2);
}

} // namespace speclocal
