#pragma once

// Deterministic randomness. All stochastic entry points take a 64-bit seed;
// per-trial seeds are derived with splitmix64 so trials are independent and
// reproducible regardless of how many random draws each one consumes.

#include <cstdint>
#include <random>
#include <vector>
#include <algorithm>

namespace fomatch {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed for trial `index` of a run seeded with `base`.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t s = base;
    std::uint64_t a = splitmix64(s);
    s = base ^ (0x632be59bd9b4e019ULL + index * 0x9e3779b97f4a7c15ULL);
    return a ^ splitmix64(s);
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

// Uniform double in [0,1). Built from the top 53 bits so the value stream is
// identical across standard libraries (uniform_real_distribution is not).
inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// n uniform ranks, pairwise distinct (ties redrawn; they occur with
// probability ~n^2 * 2^-53 but would silently break argmin tie-breaking).
inline std::vector<double> draw_distinct_ranks(std::size_t n, std::mt19937_64& eng) {
    std::vector<double> y(n);
    for (auto& v : y) v = uniform01(eng);
    for (;;) {
        std::vector<double> s(y);
        std::sort(s.begin(), s.end());
        bool clash = false;
        for (std::size_t i = 1; i < s.size(); ++i)
            if (s[i] == s[i - 1]) { clash = true; break; }
        if (!clash) return y;
        for (auto& v : y) v = uniform01(eng);
    }
}

} // namespace fomatch
