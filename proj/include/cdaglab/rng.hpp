#ifndef CDAGLAB_RNG_HPP
#define CDAGLAB_RNG_HPP

#include <cstdint>
#include <random>

namespace cdaglab {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stable derivation of independent streams from one root seed.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix64(splitmix64(root ^ splitmix64(a)) ^ splitmix64(b ^ 0x5851f42d4c957f2dULL));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(splitmix64(seed)); }

}  // namespace cdaglab

#endif
