#pragma once

#include <cmath>
#include <cstdint>

namespace ehl {

/// splitmix64 mixer; stateless hashing of counters into well-distributed bits.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

/// Uniform in [0,1) from 53 high bits.
inline double u01(std::uint64_t h) {
    return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
}

/// Standard normal from a counter-based hash, truncated to +-4 sigma.
/// Truncation keeps ambient noise bounded; the clipped mass is ~6e-5.
inline double gauss_hash(std::uint64_t key) {
    double u1 = u01(mix64(key));
    double u2 = u01(mix64(key ^ 0xda942042e4dd58b5ULL));
    if (u1 <= 0.0) u1 = 5e-324;
    double g = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    if (g > 4.0) g = 4.0;
    if (g < -4.0) g = -4.0;
    return g;
}

} // namespace ehl
