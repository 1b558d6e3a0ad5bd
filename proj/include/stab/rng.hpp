#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace stab::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Decorrelated per-stream seed so parallel workers stay reproducible and
// independent of execution order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
    splitmix64(s);
    return splitmix64(s);
}

// Unbiased draw in [0, n). std::uniform_int_distribution is
// implementation-defined, which would break byte-identical outputs.
inline std::uint64_t bounded(std::mt19937_64& g, std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t r = g();
        if (r >= threshold) return r % n;
    }
}

// Uniform double in [0, 1).
inline double unit_real(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Standard normal via Marsaglia's polar method (one value per call).
inline double gaussian(std::mt19937_64& g) {
    for (;;) {
        const double u = 2.0 * unit_real(g) - 1.0;
        const double v = 2.0 * unit_real(g) - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

template <class T>
void shuffle(std::vector<T>& v, std::mt19937_64& g) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[bounded(g, i)]);
    }
}

// First m entries of a uniformly random permutation of 0..n-1
// (partial Fisher-Yates).
inline std::vector<std::size_t> sample_indices(std::size_t n, std::size_t m,
                                               std::mt19937_64& g) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < m && i + 1 < n; ++i) {
        std::swap(idx[i], idx[i + bounded(g, n - i)]);
    }
    idx.resize(m);
    return idx;
}

}  // namespace stab::rng
