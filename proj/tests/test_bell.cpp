#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ontolab/bell.hpp"

using namespace ontolab;
namespace {

constexpr double kPi = std::numbers::pi;

// Frozen oracle values, computed before the build with 50-digit quadrature
// of the model definitions (independent of the implementation under test).
constexpr double kTvZeroVsPiOver8 = 0.30656296487637653;
constexpr double kEZeroPiOver8 = 0.70710678118654752;
constexpr double kSStandardAngles = 2.8284271247461901;

// Independent in-test oracle: plain composite midpoint rule, no breakpoint
// machinery shared with the implementation.
template <class F>
double midpoint(F f, double lo, double hi, std::size_t n) {
    double sum = 0.0;
    const double h = (hi - lo) / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) sum += f(lo + (static_cast<double>(k) + 0.5) * h);
    return sum * h;
}

}  // namespace

TEST_SUITE("bell") {

TEST_CASE("density: zeros, symmetry, scale") {
    // Zero wherever 4c = 2a+2b mod pi.
    const double a = 0.3, b = 1.1;
    for (int k = 0; k < 4; ++k) {
        const double c = reduce_angle((2 * a + 2 * b + k * kPi) / 4.0);
        CHECK(mousedrop_density(a, b, c) <= 1e-15);
    }
    // a and b enter only through their sum.
    CHECK(mousedrop_density(a, b, 0.7) == mousedrop_density(b, a, 0.7));
    // Peak value is the normalization constant.
    const double peak = reduce_angle((2 * a + 2 * b + kPi / 2) / 4.0);
    CHECK(mousedrop_density(a, b, peak) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("density values agree exactly at matched setting sums") {
    // 2a+2b identical by exact floating-point arithmetic.
    const double a1 = 0.5, b1 = 0.25, a2 = 0.75, b2 = 0.0;
    for (double c : {0.1, 0.9, 2.2, 3.0})
        CHECK(mousedrop_density(a1, b1, c) == mousedrop_density(a2, b2, c));
}

TEST_CASE("normalization: the integral is one and the fitted constant is 1/2") {
    Rng rng(2);
    for (int rep = 0; rep < 100; ++rep) {
        const double a = rng.next_double() * kPi;
        const double b = rng.next_double() * kPi;
        const double integral = integrate_piecewise(
            [&](double c) { return mousedrop_density(a, b, c); }, 0.0, kPi,
            integrand_breakpoints(a, b), 64);
        CHECK(std::abs(integral - 1.0) <= 1e-9);
        CHECK(std::abs(fitted_normalization(a, b) - 0.5) <= 1e-9);
    }
    // Independent midpoint oracle on a couple of settings.
    for (auto [a, b] : {std::pair{0.0, 0.0}, std::pair{0.9, 0.4}}) {
        const double oracle = midpoint([&](double c) { return mousedrop_density(a, b, c); }, 0.0,
                                       kPi, 1u << 20);
        CHECK(std::abs(oracle - 1.0) <= 1e-8);
    }
}

TEST_CASE("detection rule: aligned, crossed, boundary") {
    const double c = 0.77;
    CHECK(detect(c, c) == 1);
    CHECK(detect(c + kPi / 2, c) == -1);
    CHECK(detect(c + kPi / 4, c) == 1);  // cos(2*(pi/4)) == 0 maps to +1 by convention
}

TEST_CASE("sampling is reproducible and consumes a deterministic stream") {
    Rng r1(99), r2(99), r3(100);
    for (int i = 0; i < 64; ++i) {
        const double c1 = sample_hidden(0.2, 0.9, r1).c;
        const double c2 = sample_hidden(0.2, 0.9, r2).c;
        CHECK(c1 == c2);
        CHECK(c1 >= 0.0);
        CHECK(c1 < kPi);
    }
    CHECK(sample_hidden(0.2, 0.9, r3).c != sample_hidden(0.2, 0.9, r1).c);
}

TEST_CASE("sample mean of the density's sine is zero within 3 sigma") {
    const double a = 0.15, b = 0.6;
    const std::uint64_t n = 200000;
    const double mean = sample_mean_sine(a, b, n, 4242);
    const double qmean = quadrature_mean_sine(a, b);
    CHECK(std::abs(qmean) <= 1e-10);  // the density is even around its zeros
    const double sigma = std::sqrt(quadrature_var_sine(a, b) / static_cast<double>(n));
    CHECK(std::abs(mean - qmean) <= 3.0 * sigma);
}

TEST_CASE("histogram matches quadrature bin masses within 3 sigma binwise") {
    const double a = 0.0, b = kPi / 8;
    const std::uint64_t n = 200000;
    const std::size_t bins = 32;
    const auto hist = sample_histogram(a, b, n, bins, 777);
    const auto mass = bin_masses_quadrature(a, b, bins);
    std::int64_t total = 0;
    std::size_t within = 0;
    for (std::size_t k = 0; k < bins; ++k) {
        total += hist[k];
        const double expect = static_cast<double>(n) * mass[k];
        const double sigma = std::sqrt(static_cast<double>(n) * mass[k] * (1.0 - mass[k]));
        if (std::abs(static_cast<double>(hist[k]) - expect) <= 3.0 * sigma) ++within;
    }
    CHECK(total == static_cast<std::int64_t>(n));
    CHECK(within >= bins - 2);  // ~99.7% per bin; allow a couple of outliers
}

TEST_CASE("quadrature correlation: aligned and crossed polarizers are exact") {
    for (double a : {0.0, 0.4, 1.3}) {
        CHECK(std::abs(correlation_quadrature(a, a, 64).value - 1.0) <= 1e-9);
        CHECK(std::abs(correlation_quadrature(a, a + kPi / 2, 64).value + 1.0) <= 1e-9);
    }
}

TEST_CASE("quadrature correlation reproduces the frozen oracle value") {
    const auto e = correlation_quadrature(0.0, kPi / 8, 4096);
    CHECK(std::abs(e.value - kEZeroPiOver8) <= 1e-9);
    CHECK(e.std_error <= 1e-9);
    CHECK(e.method == Method::quadrature);
    CHECK_THROWS_AS(correlation_quadrature(0.0, 1.0, 7), std::domain_error);
}

TEST_CASE("monte carlo agrees with quadrature within 3 standard errors") {
    Rng seeds(31415);
    for (auto [a, b] : {std::pair{0.0, kPi / 8}, std::pair{0.0, 3 * kPi / 8},
                        std::pair{0.25, 1.2}}) {
        const auto q = correlation_quadrature(a, b, 2048);
        const auto m = correlation_montecarlo(a, b, 200000, seeds.next_u64());
        CHECK(std::abs(m.value - q.value) <= 3.0 * m.std_error);
        CHECK(std::abs(m.value) <= 1.0 + 3.0 * m.std_error);
    }
    CHECK_THROWS_AS(correlation_montecarlo(0, 0, 0, 1), std::domain_error);
}

TEST_CASE("monte carlo tracks quadrature across 100 seeded runs") {
    // At least 99 of 100 independently seeded estimates within 3 standard
    // errors of the quadrature value.
    const double a = 0.2, b = 1.0;
    const auto q = correlation_quadrature(a, b, 2048);
    std::size_t within = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto m = correlation_montecarlo(a, b, 50000, derive_seed(606, s));
        if (std::abs(m.value - q.value) <= 3.0 * m.std_error) ++within;
    }
    CHECK(within >= 99);
}

TEST_CASE("monte carlo is deterministic and thread-count independent") {
    const auto a = correlation_montecarlo(0.0, kPi / 8, 300000, 5150, Exec::serial);
    const auto b = correlation_montecarlo(0.0, kPi / 8, 300000, 5150, Exec::parallel);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    const auto c = correlation_montecarlo(0.0, kPi / 8, 300000, 5151, Exec::parallel);
    CHECK(a.value != c.value);

    const auto h1 = sample_histogram(0.3, 0.4, 100000, 16, 9, Exec::serial);
    const auto h2 = sample_histogram(0.3, 0.4, 100000, 16, 9, Exec::parallel);
    CHECK(h1 == h2);
}

TEST_CASE("chsh: equal settings give S = 2, standard angles match the frozen oracle") {
    const auto flat = chsh(0.5, 0.5, 0.5, 0.5, Method::quadrature, 256, 0);
    CHECK(std::abs(flat.s - 2.0) <= 1e-9);

    const auto r = chsh(0.0, kPi / 4, kPi / 8, 3 * kPi / 8, Method::quadrature, 2048, 0);
    CHECK(std::abs(r.s - kSStandardAngles) <= 1e-9);

    // Monte Carlo S tracks the quadrature S (no claim about its true value).
    const auto mc = chsh(0.0, kPi / 4, kPi / 8, 3 * kPi / 8, Method::montecarlo, 250000, 8675309);
    CHECK(std::abs(mc.s - r.s) <= 0.02);
}

TEST_CASE("S is invariant under a common offset of all four angles") {
    const auto base = chsh(0.0, kPi / 4, kPi / 8, 3 * kPi / 8, Method::quadrature, 1024, 0);
    for (double off : {0.3, 1.1}) {
        const auto shifted =
            chsh(off, kPi / 4 + off, kPi / 8 + off, 3 * kPi / 8 + off, Method::quadrature, 1024, 0);
        CHECK(std::abs(shifted.s - base.s) <= 1e-9);
    }
}

TEST_CASE("counterfactual shift: zero iff the setting sum is unchanged mod pi") {
    CHECK(counterfactual_shift(0.4, 0.9, 0.4, 0.9) == 0.0);
    // 2a+2b unchanged (exact arithmetic): distance is zero.
    CHECK(counterfactual_shift(0.5, 0.25, 0.75, 0.0) <= 1e-15);
    // Frozen regression constant for (0,0) vs (0, pi/8).
    const double tv = counterfactual_shift(0.0, 0.0, 0.0, kPi / 8);
    CHECK(std::abs(tv - kTvZeroVsPiOver8) <= 1e-12);
    CHECK(tv > 0.05);
    // Independent midpoint oracle.
    const double oracle = midpoint(
        [&](double c) {
            return std::abs(mousedrop_density(0, 0, c) - mousedrop_density(0, kPi / 8, c));
        },
        0.0, kPi, 1u << 20) / 2.0;
    CHECK(std::abs(tv - oracle) <= 1e-8);
}

TEST_CASE("quantum reference values") {
    CHECK(quantum_reference(0.7, 0.7) == 1.0);
    CHECK(std::abs(quantum_reference(0.2, 0.2 + kPi / 4)) <= 1e-15);
    CHECK(quantum_reference(0.1, 0.1 + kPi / 2) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("angle reduction and settings type") {
    CHECK(reduce_angle(kPi) == 0.0);
    CHECK(reduce_angle(-kPi / 4) == doctest::Approx(3 * kPi / 4).epsilon(1e-15));
    const PolarizerSettings s(kPi + 0.1, -0.2);
    CHECK(s.a == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(s.b == doctest::Approx(kPi - 0.2).epsilon(1e-12));
    CHECK_THROWS_AS(reduce_angle(std::nan("")), std::domain_error);
}

TEST_CASE("piecewise integrator sanity") {
    CHECK(std::abs(integrate_piecewise([](double x) { return std::sin(x); }, 0.0, kPi, {}, 16) -
                   2.0) <= 1e-12);
    CHECK_THROWS_AS(integrate_piecewise([](double) { return 1.0; }, 1.0, 1.0, {}, 4),
                    std::domain_error);
}

}  // TEST_SUITE
