#pragma once

// State-space primitives: amplitudes, normalized state vectors over the
// ontological basis, ontological-vs-superposed classification, and Born
// probabilities.

#include <complex>
#include <cstddef>
#include <variant>
#include <vector>

namespace ontolab {

using Amplitude = std::complex<double>;

// Default classification tolerance. Eigendecomposition round-off accumulates
// to ~1e-12 per step; 1e-9 leaves margin over thousands of steps.
inline constexpr double kClassifyTol = 1e-9;

/// Unit-norm amplitude vector over the ontological basis.
///
/// The constructor accepts vectors whose norm is within 1e-6 of one
/// (renormalizing them) and rejects anything further off as a user error.
/// Vectors already within 1e-12 of unit norm are stored untouched, so
/// norm-preserving operations (index shuffles, phase factors) round-trip
/// bit-exactly.
class StateVector {
public:
    static constexpr double kNormSlack = 1e-6;
    static constexpr double kNormTol = 1e-12;

    explicit StateVector(std::vector<Amplitude> amplitudes);

    /// Basis vector e_index of the given dimension.
    static StateVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return amps_.size(); }
    const std::vector<Amplitude>& amplitudes() const { return amps_; }
    const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

    bool operator==(const StateVector& other) const = default;

private:
    std::vector<Amplitude> amps_;
};

/// Exactly one amplitude has modulus ~1; `phase` is its argument in (-pi, pi].
struct Ontological {
    std::size_t index = 0;
    double phase = 0.0;
};

struct Superposed {};

using StateClass = std::variant<Ontological, Superposed>;

bool is_ontological(const StateClass& c);

/// Ontological(i, theta) iff |amplitude_i| >= 1 - tol, else Superposed.
/// Normalization guarantees at most one index can qualify for tol < 0.5.
StateClass classify_state(const StateVector& state, double tol = kClassifyTol);

/// p_i = |amplitude_i|^2; sums to one within 1e-12 by the norm invariant.
std::vector<double> born_probabilities(const StateVector& state);

/// Non-increasing sequence of amplitude moduli: the conserved fingerprint of
/// the uncertainty distribution.
std::vector<double> amplitude_multiset(const StateVector& state);

/// Max elementwise distance between two equal-length sorted multisets.
double multiset_deviation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace ontolab
