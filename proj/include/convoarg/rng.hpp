#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace convoarg {

// All randomized code in the library draws through these helpers instead of
// <random> distributions, whose output is implementation-defined. Same seed,
// same stream, on every platform.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    // splitmix64 scramble so that nearby (seed, stream) pairs decorrelate
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
}

/// Uniform double in [0, 1).
inline double uniform_real(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [lo, hi], inclusive.
inline std::uint64_t uniform_int(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    if (span == 0) return rng();  // full 64-bit range
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % span + 1) % span;
    std::uint64_t v = rng();
    while (v > limit) v = rng();
    return lo + v % span;
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    return static_cast<std::size_t>(uniform_int(rng, 0, n - 1));
}

/// Standard normal via Box-Muller (the sine branch is discarded to keep the
/// stream one-draw-per-call independent of caller interleaving).
inline double normal(Rng& rng, double mean = 0.0, double stddev = 1.0) {
    double u1 = uniform_real(rng);
    while (u1 <= 0.0) u1 = uniform_real(rng);
    const double u2 = uniform_real(rng);
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    return mean + stddev * z;
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[uniform_index(rng, i)]);
    }
}

/// First k entries of a seeded permutation of 0..n-1.
inline std::vector<std::size_t> sample_indices(Rng& rng, std::size_t n, std::size_t k) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
        std::swap(idx[i], idx[i + uniform_index(rng, n - i)]);
    }
    idx.resize(k);
    return idx;
}

}  // namespace convoarg
