#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace enkit::core {

// splitmix64 finalizer; used to derive independent substreams from one seed.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return mix64(seed ^ mix64(tag));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag_a, std::uint64_t tag_b) {
    return mix64(derive_seed(seed, tag_a) ^ mix64(tag_b + 0x51ed2701ULL));
}

// Uniform in [0, 1). Hand-rolled so sequences are identical on every
// platform (libstdc++ distribution objects are implementation-defined).
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Integer in [0, n). n must be > 0.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform01(rng) * static_cast<double>(n)) % n;
}

inline double exponential(std::mt19937_64& rng, double mean) {
    return -mean * std::log(1.0 - uniform01(rng));
}

template <typename T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace enkit::core
