#pragma once

#include <cstdint>
#include <random>

namespace critwalk {

// splitmix64; used to expand a master seed into independent per-replica seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed for replica `idx` derived from `master`. Independent of scheduling:
// the mapping depends only on (master, idx).
inline std::uint64_t replica_seed(std::uint64_t master, std::uint64_t idx) {
    std::uint64_t s = master;
    std::uint64_t a = splitmix64(s);
    s = master ^ (0x6a09e667f3bcc909ULL + idx * 0x9e3779b97f4a7c15ULL);
    std::uint64_t b = splitmix64(s);
    return a ^ (b + 0x2545f4914f6cdd1dULL * (idx + 1));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) {
    Rng rng(seed);
    rng.discard(8);
    return rng;
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Uniform integer in [0, n).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

inline double normal01(Rng& rng) {
    return std::normal_distribution<double>(0.0, 1.0)(rng);
}

} // namespace critwalk
