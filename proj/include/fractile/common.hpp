#pragma once

// Shared error types, PRNG, and small utilities.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>
#include <functional>

namespace fractile {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct invalid_word_error : error { using error::error; };
struct not_contractive_error : error { using error::error; };
struct budget_exceeded_error : error { using error::error; };
struct dim_mismatch_error : error { using error::error; };
struct not_nonoverlapping_error : error { using error::error; };
struct invalid_mask_error : error { using error::error; };
struct graph_error : error { using error::error; };
struct outside_attractor_error : error { using error::error; };
struct outside_expansion_error : error { using error::error; };
struct config_error : error { using error::error; };
struct numeric_error : error { using error::error; };

// splitmix64: seedable, identical stream on every platform.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double next_double() { return (next() >> 11) * 0x1.0p-53; }
};

// Stateless mix of (seed, index); used where random access to a stream is needed.
inline uint64_t mix64(uint64_t seed, uint64_t index) {
    SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ull * (index + 1)));
    return g.next();
}

inline double mix64_double(uint64_t seed, uint64_t index) {
    return (mix64(seed, index) >> 11) * 0x1.0p-53;
}

// Chunked parallel loop over [0, n). Falls back to serial for small n.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                         std::size_t min_grain = 4096) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw <= 1 || n < 2 * min_grain) {
        body(0, n);
        return;
    }
    std::size_t nthreads = std::min<std::size_t>(hw, (n + min_grain - 1) / min_grain);
    std::size_t chunk = (n + nthreads - 1) / nthreads;
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([=, &body] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

constexpr std::size_t kDefaultCellBudget = std::size_t(1) << 28;
constexpr std::size_t kDefaultTileBudget = std::size_t(1) << 22;

} // namespace fractile
