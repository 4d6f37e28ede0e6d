#pragma once

// Deterministic evolution laws as generalized permutations: universe
// builders, period detection, matrix representation, and Hamiltonian
// extraction from the one-step evolution operator.
//
// Two spectral routes are provided. Permutation inputs are diagonalized
// exactly from their cycle structure (eigenvalues of an L-cycle with phase
// sum Phi are the L-th roots of e^{i Phi}; eigenvectors are Fourier columns
// on the cycle support). Arbitrary unitaries are normal matrices, handled by
// jointly diagonalizing the commuting Hermitian and skew parts. Each route
// serves as the other's cross-check in the tests.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "ontolab/core.hpp"
#include "ontolab/rng.hpp"

namespace ontolab {

using CMatrix = Eigen::MatrixXcd;

/// Duration of one beat of the external clock (abstract units).
struct TimeStep {
    explicit TimeStep(double value);
    double dt;
};

/// Eigenphase window: H is fixed only modulo 2*pi/dt, so the window is an
/// explicit parameter.
enum class Branch { zero_to_two_pi, minus_pi_to_pi };

/// Maps an angle into the chosen branch window.
double to_branch(double angle, Branch branch);

/// Bijection on basis indices with a unit-modulus phase per index: the
/// deterministic one-step evolution law. Column i of the matrix form has its
/// single nonzero e^{i phase(i)} at row target(i).
class GeneralizedPermutation {
public:
    GeneralizedPermutation(std::vector<std::size_t> target, std::vector<double> phase);
    static GeneralizedPermutation pure(std::vector<std::size_t> target);
    static GeneralizedPermutation identity(std::size_t dim);

    std::size_t dim() const { return target_.size(); }
    std::size_t target(std::size_t i) const { return target_[i]; }
    double phase(std::size_t i) const { return phase_[i]; }
    const std::vector<std::size_t>& targets() const { return target_; }
    const std::vector<double>& phases() const { return phase_; }

    /// True when every phase is exactly zero (evolution is a pure shuffle).
    bool is_pure() const;
    bool is_identity() const;

    GeneralizedPermutation inverse() const;

    /// Cycles of the index bijection, each listed in evolution order.
    std::vector<std::vector<std::size_t>> cycles() const;

private:
    std::vector<std::size_t> target_;
    std::vector<double> phase_;
};

/// Two distinct inputs mapping to the same image: the update rule is not a
/// valid (time-reversible) evolution law.
struct NotInvertible {
    std::size_t first;
    std::size_t second;
    std::size_t image;
};

using UpdateRuleResult = std::variant<GeneralizedPermutation, NotInvertible>;

/// Accepts the table iff it is a bijection; otherwise reports a collision.
UpdateRuleResult from_update_rule(const std::vector<std::size_t>& table);

/// Single N-cycle: target(i) = (i+1) mod N, all phases zero.
GeneralizedPermutation cogwheel(std::size_t n);

/// Local automaton on 2^sites configurations: one ring of bits, site 0 the
/// least significant, each step moving the bit at site x to site (x+1) mod
/// sites. Signal speed is exactly one site per step. sites in [1, 12].
GeneralizedPermutation bit_shift_universe(std::size_t sites);

/// Least k >= 1 with P^k = identity (lcm of cycle lengths). Pure
/// permutations only: phased rotations may be aperiodic, so they are
/// refused rather than silently mishandled.
std::uint64_t period(const GeneralizedPermutation& p);

/// Dense unitary with validated construction.
class UnitaryMatrix {
public:
    static constexpr double kUnitarityTol = 1e-10;

    /// Validates ||U'U - I||_max <= kUnitarityTol (O(dim^3)).
    static UnitaryMatrix from_dense(CMatrix entries);

    std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
    const CMatrix& entries() const { return entries_; }

private:
    explicit UnitaryMatrix(CMatrix entries) : entries_(std::move(entries)) {}
    friend UnitaryMatrix to_matrix(const GeneralizedPermutation& p);
    friend UnitaryMatrix random_unitary(std::size_t dim, Rng& rng);

    CMatrix entries_;
};

/// Matrix form of P: entry (target(i), i) = e^{i phase(i)}, all else zero.
UnitaryMatrix to_matrix(const GeneralizedPermutation& p);

/// Recovers the generalized permutation structure of a dense unitary, if it
/// has one: exactly one nonzero of unit modulus per row and column.
std::optional<GeneralizedPermutation> as_generalized_permutation(const CMatrix& u, double tol = 1e-9);

/// Applies P^steps to a state by index shuffling (never by matrix products);
/// pure permutations move amplitudes bit-exactly.
StateVector evolve(const StateVector& psi, const GeneralizedPermutation& p, std::uint64_t steps);

/// Image of a basis index under P^steps.
std::size_t evolve_index(const GeneralizedPermutation& p, std::size_t index, std::uint64_t steps);

/// Eigen-decomposition of a unitary in the convention U = V diag(e^{-i phi}) V'.
/// Columns of `eigenvectors` are orthonormal; `eigenphases` lie in the branch
/// window chosen at construction.
struct Spectrum {
    std::vector<double> eigenphases;
    CMatrix eigenvectors;

    /// Eigenphases in ascending order (the matrix columns stay unsorted).
    std::vector<double> sorted_eigenphases() const;
};

/// Dense route for arbitrary unitaries: joint diagonalization of the
/// commuting Hermitian and skew parts, with near-degenerate clusters (gap
/// < 1e-8) re-orthonormalized as a block. The eigenvector matrix is unitary
/// for any degeneracy pattern.
Spectrum spectrum(const UnitaryMatrix& u, Branch branch = Branch::zero_to_two_pi);

/// Cycle route, exact for generalized permutations (no iterative eigensolver).
Spectrum spectrum(const GeneralizedPermutation& p, Branch branch = Branch::zero_to_two_pi);

/// Eigenphases only (no eigenvector matrix): O(dim), cycle route.
std::vector<double> eigenphases_of(const GeneralizedPermutation& p, Branch branch = Branch::zero_to_two_pi);

/// H with U = exp(-i H dt): Hermitian, eigenvalues of H*dt in the branch
/// window. Dense route.
CMatrix extract_hamiltonian(const UnitaryMatrix& u, TimeStep dt, Branch branch = Branch::zero_to_two_pi);

/// Cycle route for permutation laws; identical contract.
CMatrix extract_hamiltonian(const GeneralizedPermutation& p, TimeStep dt, Branch branch = Branch::zero_to_two_pi);

/// V diag(e^{-i phi}) V' — the decomposition's reconstruction of U.
CMatrix reconstruct_unitary(const Spectrum& s);

/// max-entry norm of exp(-i H dt) - U for a permutation law, evaluated
/// per cycle in O(dim^2) through the spectral form of the exponential.
double roundtrip_residual(const GeneralizedPermutation& p, TimeStep dt, Branch branch = Branch::zero_to_two_pi);

/// Scaling-and-squaring Taylor exponential. Independent of any spectral
/// decomposition; intended as a verification oracle on small dims.
CMatrix matrix_exp(const CMatrix& a);

double max_abs_diff(const CMatrix& a, const CMatrix& b);

/// max-entry norm of U'U - I.
double unitarity_defect(const CMatrix& u);

/// Haar-distributed unitary via QR of a complex Gaussian matrix.
UnitaryMatrix random_unitary(std::size_t dim, Rng& rng);

/// Uniform random permutation; phases uniform in (-pi, pi) when requested.
GeneralizedPermutation random_generalized_permutation(std::size_t dim, Rng& rng, bool with_phases);

}  // namespace ontolab
