#pragma once

// Seeded randomness with a documented splitting rule.
//
// Every parallel kernel decomposes its work into a batch grid that is fixed
// by the problem size alone; batch b of logical stream s draws from
// mt19937_64 seeded with derive_seed(derive_seed(master, s), b). Results are
// therefore independent of thread count and merge order.

#include <cstdint>
#include <random>
#include <vector>

#include "ontolab/core.hpp"

namespace ontolab {

/// splitmix64 finalizer (Steele, Lea, Flood 2014) — the standard 64-bit mixer.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Sub-stream seed: splitmix64 applied to master + (stream+1) * golden ratio.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master + (stream + 1) * 0x9E3779B97F4A7C15ULL);
}

/// mt19937_64 with an explicit, platform-independent double mapping.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1), 53 significant bits.
    double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform index in [0, n) by rejection; unbiased.
    std::size_t next_index(std::size_t n);

    /// Standard normal via Box-Muller (one value per call; no caching).
    double next_gaussian();

private:
    std::mt19937_64 engine_;
};

/// Uniform random permutation of {0..dim-1} (Fisher-Yates).
std::vector<std::size_t> random_permutation(std::size_t dim, Rng& rng);

/// Haar-like random unit state: i.i.d. complex Gaussian entries, normalized.
StateVector random_state(std::size_t dim, Rng& rng);

}  // namespace ontolab
