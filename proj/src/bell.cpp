#include "ontolab/bell.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ontolab {

namespace {

constexpr double kPi = std::numbers::pi;

// 16-point Gauss-Legendre abscissae/weights on [-1, 1] (positive half).
constexpr double kGlNode[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499,
};
constexpr double kGlWeight[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541,
};

double gl16(const std::function<double(double)>& f, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double sum = 0.0;
    for (int k = 0; k < 8; ++k) {
        const double dx = half * kGlNode[k];
        sum += kGlWeight[k] * (f(mid - dx) + f(mid + dx));
    }
    return sum * half;
}

constexpr std::uint64_t kBatchSize = 65536;

// Batched +-1 (or generic double) Monte Carlo over the hidden variable.
template <class PerSample, class Accumulate>
void run_batches(std::uint64_t n, std::uint64_t seed, Exec exec, PerSample per_sample,
                 Accumulate accumulate) {
    const std::uint64_t batches = (n + kBatchSize - 1) / kBatchSize;
    for_each_index(static_cast<std::size_t>(batches), exec, [&](std::size_t b) {
        const std::uint64_t first = static_cast<std::uint64_t>(b) * kBatchSize;
        const std::uint64_t count = std::min(kBatchSize, n - first);
        Rng rng(derive_seed(seed, b));
        per_sample(b, count, rng);
    });
    accumulate(batches);
}

}  // namespace

double reduce_angle(double radians) {
    if (!std::isfinite(radians)) throw std::domain_error("angle must be finite");
    double r = std::fmod(radians, kPi);
    if (r < 0.0) r += kPi;
    if (r >= kPi) r = 0.0;
    return r;
}

PolarizerSettings::PolarizerSettings(double a_radians, double b_radians)
    : a(reduce_angle(a_radians)), b(reduce_angle(b_radians)) {}

double mousedrop_density(double a, double b, double c) {
    return kMousedropNormalization * std::abs(std::sin(4.0 * c - 2.0 * (a + b)));
}

int detect(double setting, double c) {
    return std::cos(2.0 * (setting - c)) < 0.0 ? -1 : +1;
}

HiddenPolarization sample_hidden(double a, double b, Rng& rng) {
    // Flat envelope at the density maximum C: accept u2 <= |sin(4c - phi)|.
    for (;;) {
        const double c = kPi * rng.next_double();
        const double u = rng.next_double();
        if (u <= std::abs(std::sin(4.0 * c - 2.0 * (a + b)))) return HiddenPolarization{c};
    }
}

double quantum_reference(double a, double b) {
    return std::cos(2.0 * (a - b));
}

namespace {

void push_reduced(std::vector<double>& pts, double c) {
    double r = std::fmod(c, kPi);
    if (r < 0.0) r += kPi;
    if (r > 0.0 && r < kPi) pts.push_back(r);
}

std::vector<double> density_breakpoints(double a, double b) {
    std::vector<double> pts;
    const double phi = 2.0 * a + 2.0 * b;
    for (int k = 0; k < 4; ++k) push_reduced(pts, (phi + k * kPi) / 4.0);
    return pts;
}

std::vector<double> detector_breakpoints(double setting) {
    std::vector<double> pts;
    for (int k = 0; k < 2; ++k) push_reduced(pts, setting + kPi / 4.0 + k * kPi / 2.0);
    return pts;
}

}  // namespace

std::vector<double> integrand_breakpoints(double a, double b) {
    std::vector<double> pts = density_breakpoints(a, b);
    for (double c : detector_breakpoints(a)) pts.push_back(c);
    for (double c : detector_breakpoints(b)) pts.push_back(c);
    return pts;
}

double integrate_piecewise(const std::function<double(double)>& f, double lo, double hi,
                           std::vector<double> interior, std::size_t panels) {
    if (!(hi > lo)) throw std::domain_error("integrate_piecewise: empty interval");
    if (panels == 0) throw std::domain_error("integrate_piecewise: at least one panel required");
    std::vector<double> pts;
    pts.push_back(lo);
    std::sort(interior.begin(), interior.end());
    for (double c : interior) {
        if (c > lo + 1e-14 && c < hi - 1e-14 && (pts.empty() || c - pts.back() > 1e-14)) pts.push_back(c);
    }
    pts.push_back(hi);

    double total = 0.0;
    const double span = hi - lo;
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
        const double l = pts[s];
        const double h = pts[s + 1];
        const auto sub = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::lround(static_cast<double>(panels) * (h - l) / span)));
        const double step = (h - l) / static_cast<double>(sub);
        for (std::size_t j = 0; j < sub; ++j)
            total += gl16(f, l + step * static_cast<double>(j), l + step * static_cast<double>(j + 1));
    }
    return total;
}

double fitted_normalization(double a, double b, std::size_t panels) {
    const double integral = integrate_piecewise(
        [&](double c) { return std::abs(std::sin(4.0 * c - 2.0 * (a + b))); }, 0.0, kPi,
        density_breakpoints(a, b), panels);
    return 1.0 / integral;
}

CorrelationEstimate correlation_quadrature(double a, double b, std::size_t panels) {
    if (panels < 8) throw std::domain_error("correlation_quadrature: gridsize must be at least 8");
    const double ar = reduce_angle(a);
    const double br = reduce_angle(b);
    const auto integrand = [&](double c) {
        return mousedrop_density(ar, br, c) * detect(ar, c) * detect(br, c);
    };
    const auto pts = integrand_breakpoints(ar, br);
    const double full = integrate_piecewise(integrand, 0.0, kPi, pts, panels);
    const double half = integrate_piecewise(integrand, 0.0, kPi, pts, std::max<std::size_t>(8, panels / 2));
    CorrelationEstimate e;
    e.value = full;
    e.std_error = std::abs(full - half);
    e.n = panels;
    e.method = Method::quadrature;
    return e;
}

CorrelationEstimate correlation_montecarlo(double a, double b, std::uint64_t n, std::uint64_t seed,
                                           Exec exec) {
    if (n == 0) throw std::domain_error("correlation_montecarlo: sample count must be positive");
    const double ar = reduce_angle(a);
    const double br = reduce_angle(b);
    const std::uint64_t batches = (n + kBatchSize - 1) / kBatchSize;
    std::vector<std::int64_t> sums(static_cast<std::size_t>(batches), 0);
    run_batches(
        n, seed, exec,
        [&](std::size_t batch, std::uint64_t count, Rng& rng) {
            std::int64_t s = 0;
            for (std::uint64_t i = 0; i < count; ++i) {
                const double c = sample_hidden(ar, br, rng).c;
                s += detect(ar, c) * detect(br, c);
            }
            sums[batch] = s;
        },
        [](std::uint64_t) {});
    std::int64_t total = 0;
    for (std::int64_t s : sums) total += s;
    CorrelationEstimate e;
    e.value = static_cast<double>(total) / static_cast<double>(n);
    // Products are +-1, so sum of squares is n.
    e.std_error = n > 1 ? std::sqrt(std::max(0.0, (1.0 - e.value * e.value) / static_cast<double>(n - 1)))
                        : 0.0;
    e.n = n;
    e.method = Method::montecarlo;
    return e;
}

CorrelationEstimate correlation(double a, double b, Method method, std::uint64_t n_or_panels,
                                std::uint64_t seed, Exec exec) {
    if (method == Method::quadrature)
        return correlation_quadrature(a, b, static_cast<std::size_t>(n_or_panels));
    return correlation_montecarlo(a, b, n_or_panels, seed, exec);
}

ChshResult chsh(double a, double ap, double b, double bp, Method method, std::uint64_t n_or_panels,
                std::uint64_t seed, Exec exec) {
    ChshResult r;
    r.ab = correlation(a, b, method, n_or_panels, derive_seed(seed, 0), exec);
    r.abp = correlation(a, bp, method, n_or_panels, derive_seed(seed, 1), exec);
    r.apb = correlation(ap, b, method, n_or_panels, derive_seed(seed, 2), exec);
    r.apbp = correlation(ap, bp, method, n_or_panels, derive_seed(seed, 3), exec);
    r.s = r.ab.value - r.abp.value + r.apb.value + r.apbp.value;
    return r;
}

double counterfactual_shift(double a, double b, double ap, double bp, std::size_t panels) {
    const double a1 = reduce_angle(a), b1 = reduce_angle(b);
    const double a2 = reduce_angle(ap), b2 = reduce_angle(bp);
    std::vector<double> pts = density_breakpoints(a1, b1);
    for (double c : density_breakpoints(a2, b2)) pts.push_back(c);
    // Crossings of the two densities: zeros of sin(u1) -+ sin(u2), all at
    // c = (phi1 + phi2 + k*pi) / 8.
    const double phi_sum = 2.0 * (a1 + b1 + a2 + b2);
    for (int k = 0; k < 8; ++k) {
        push_reduced(pts, (phi_sum + k * kPi) / 8.0);
        push_reduced(pts, (phi_sum + kPi / 2.0 + k * kPi) / 8.0);
    }
    const double integral = integrate_piecewise(
        [&](double c) { return std::abs(mousedrop_density(a1, b1, c) - mousedrop_density(a2, b2, c)); },
        0.0, kPi, std::move(pts), panels);
    return 0.5 * integral;
}

std::vector<std::int64_t> sample_histogram(double a, double b, std::uint64_t n, std::size_t bins,
                                           std::uint64_t seed, Exec exec) {
    if (n == 0) throw std::domain_error("sample_histogram: sample count must be positive");
    if (bins == 0) throw std::domain_error("sample_histogram: at least one bin required");
    const double ar = reduce_angle(a);
    const double br = reduce_angle(b);
    const std::uint64_t batches = (n + kBatchSize - 1) / kBatchSize;
    std::vector<std::vector<std::int64_t>> partial(static_cast<std::size_t>(batches));
    run_batches(
        n, seed, exec,
        [&](std::size_t batch, std::uint64_t count, Rng& rng) {
            std::vector<std::int64_t> h(bins, 0);
            for (std::uint64_t i = 0; i < count; ++i) {
                const double c = sample_hidden(ar, br, rng).c;
                auto idx = static_cast<std::size_t>(c / kPi * static_cast<double>(bins));
                if (idx >= bins) idx = bins - 1;
                ++h[idx];
            }
            partial[batch] = std::move(h);
        },
        [](std::uint64_t) {});
    std::vector<std::int64_t> out(bins, 0);
    for (const auto& h : partial)
        for (std::size_t k = 0; k < bins; ++k) out[k] += h[k];
    return out;
}

std::vector<double> bin_masses_quadrature(double a, double b, std::size_t bins, std::size_t panels) {
    if (bins == 0) throw std::domain_error("bin_masses_quadrature: at least one bin required");
    const double ar = reduce_angle(a);
    const double br = reduce_angle(b);
    const auto pts = density_breakpoints(ar, br);
    std::vector<double> masses(bins, 0.0);
    const std::size_t per_bin = std::max<std::size_t>(4, panels / bins);
    for (std::size_t k = 0; k < bins; ++k) {
        const double lo = kPi * static_cast<double>(k) / static_cast<double>(bins);
        const double hi = kPi * static_cast<double>(k + 1) / static_cast<double>(bins);
        std::vector<double> interior;
        for (double c : pts)
            if (c > lo && c < hi) interior.push_back(c);
        masses[k] = integrate_piecewise([&](double c) { return mousedrop_density(ar, br, c); }, lo, hi,
                                        std::move(interior), per_bin);
    }
    return masses;
}

double sample_mean_sine(double a, double b, std::uint64_t n, std::uint64_t seed, Exec exec) {
    if (n == 0) throw std::domain_error("sample_mean_sine: sample count must be positive");
    const double ar = reduce_angle(a);
    const double br = reduce_angle(b);
    const std::uint64_t batches = (n + kBatchSize - 1) / kBatchSize;
    std::vector<double> sums(static_cast<std::size_t>(batches), 0.0);
    run_batches(
        n, seed, exec,
        [&](std::size_t batch, std::uint64_t count, Rng& rng) {
            double s = 0.0;
            for (std::uint64_t i = 0; i < count; ++i) {
                const double c = sample_hidden(ar, br, rng).c;
                s += std::sin(4.0 * c - 2.0 * (ar + br));
            }
            sums[batch] = s;
        },
        [](std::uint64_t) {});
    double total = 0.0;
    for (double s : sums) total += s;  // fixed batch order
    return total / static_cast<double>(n);
}

double quadrature_mean_sine(double a, double b, std::size_t panels) {
    const double ar = reduce_angle(a), br = reduce_angle(b);
    return integrate_piecewise(
        [&](double c) { return mousedrop_density(ar, br, c) * std::sin(4.0 * c - 2.0 * (ar + br)); },
        0.0, kPi, density_breakpoints(ar, br), panels);
}

double quadrature_var_sine(double a, double b, std::size_t panels) {
    const double ar = reduce_angle(a), br = reduce_angle(b);
    const double mean = quadrature_mean_sine(ar, br, panels);
    const double second = integrate_piecewise(
        [&](double c) {
            const double s = std::sin(4.0 * c - 2.0 * (ar + br));
            return mousedrop_density(ar, br, c) * s * s;
        },
        0.0, kPi, density_breakpoints(ar, br), panels);
    return second - mean * mean;
}

}  // namespace ontolab
