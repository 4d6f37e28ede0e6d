#include "ontolab/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace ontolab {

std::size_t Rng::next_index(std::size_t n) {
    if (n == 0) throw std::domain_error("Rng::next_index: n must be positive");
    const std::uint64_t bound = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
}

double Rng::next_gaussian() {
    // Box-Muller; u clamped away from 0 so the log stays finite.
    double u = next_double();
    if (u <= 0.0) u = 0x1.0p-53;
    const double v = next_double();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

std::vector<std::size_t> random_permutation(std::size_t dim, Rng& rng) {
    if (dim == 0) throw std::domain_error("random_permutation: dim must be positive");
    std::vector<std::size_t> p(dim);
    for (std::size_t i = 0; i < dim; ++i) p[i] = i;
    for (std::size_t i = dim; i > 1; --i) {
        const std::size_t j = rng.next_index(i);
        std::swap(p[i - 1], p[j]);
    }
    return p;
}

StateVector random_state(std::size_t dim, Rng& rng) {
    std::vector<Amplitude> amps(dim);
    double n2 = 0.0;
    for (auto& a : amps) {
        a = Amplitude(rng.next_gaussian(), rng.next_gaussian());
        n2 += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amps) a *= inv;
    return StateVector(std::move(amps));
}

}  // namespace ontolab
