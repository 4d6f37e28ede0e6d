#include "ontolab/core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ontolab {

namespace {

double norm_squared(const std::vector<Amplitude>& amps) {
    double s = 0.0;
    for (const auto& a : amps) s += std::norm(a);
    return s;
}

}  // namespace

StateVector::StateVector(std::vector<Amplitude> amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.empty()) throw std::invalid_argument("StateVector: dimension must be positive");
    for (const auto& a : amps_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw std::invalid_argument("StateVector: non-finite amplitude");
    }
    const double n2 = norm_squared(amps_);
    const double n = std::sqrt(n2);
    if (std::abs(n - 1.0) > kNormSlack)
        throw std::invalid_argument("StateVector: norm " + std::to_string(n) +
                                    " further than 1e-6 from one; refusing to normalize");
    // Within round-off of unit norm: keep amplitudes bit-exact.
    if (std::abs(n2 - 1.0) > kNormTol) {
        for (auto& a : amps_) a /= n;
    }
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (dim == 0) throw std::invalid_argument("StateVector::basis: dim must be positive");
    if (index >= dim) throw std::invalid_argument("StateVector::basis: index out of range");
    std::vector<Amplitude> amps(dim, Amplitude(0.0, 0.0));
    amps[index] = Amplitude(1.0, 0.0);
    return StateVector(std::move(amps));
}

bool is_ontological(const StateClass& c) {
    return std::holds_alternative<Ontological>(c);
}

StateClass classify_state(const StateVector& state, double tol) {
    if (!(tol > 0.0 && tol < 0.5)) throw std::domain_error("classify_state: tol must lie in (0, 0.5)");
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if (std::abs(state[i]) >= 1.0 - tol) {
            double phase = std::arg(state[i]);
            if (phase == -std::numbers::pi) phase = std::numbers::pi;  // report in (-pi, pi]
            return Ontological{i, phase};
        }
    }
    return Superposed{};
}

std::vector<double> born_probabilities(const StateVector& state) {
    std::vector<double> p(state.dim());
    for (std::size_t i = 0; i < state.dim(); ++i) p[i] = std::norm(state[i]);
    return p;
}

std::vector<double> amplitude_multiset(const StateVector& state) {
    std::vector<double> m(state.dim());
    for (std::size_t i = 0; i < state.dim(); ++i) m[i] = std::abs(state[i]);
    std::sort(m.begin(), m.end(), std::greater<double>());
    return m;
}

double multiset_deviation(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("multiset_deviation: size mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace ontolab
