#pragma once

// The two conservation laws and their verification: the amplitude multiset
// (ontology) and the Born-probability multiset (uncertainty) are carried
// unchanged by any generalized permutation, while generic unitaries break
// both — the negative control demonstrating the law is nontrivial.

#include <cstdint>
#include <vector>

#include "ontolab/core.hpp"
#include "ontolab/evolution.hpp"
#include "ontolab/exec.hpp"

namespace ontolab {

// Comparison tolerances: shuffle evolution is exact, matrix evolution is not.
inline constexpr double kShuffleTol = 1e-12;
inline constexpr double kMatrixTol = 1e-9;
inline constexpr double kNegativeControlTol = 1e-6;

struct ConservationReport {
    StateClass initial_class;
    StateClass final_class;
    std::vector<double> initial_multiset;
    std::vector<double> final_multiset;
    double max_multiset_deviation = 0.0;
    bool pass = false;
};

/// Sorted comparison is the default (the conserved object is basis-index
/// agnostic); `aligned` additionally composes with the known k-step
/// permutation and compares element-wise — the strict variant.
enum class MultisetComparison { sorted, aligned };

/// Evolves psi by P^steps and compares amplitude-modulus multisets.
/// pass iff deviation <= tol and (ontological in => ontological out).
ConservationReport check_ontology_conservation(const GeneralizedPermutation& p, const StateVector& psi,
                                               std::uint64_t steps, double tol = kShuffleTol,
                                               MultisetComparison cmp = MultisetComparison::sorted);

/// Same check on the Born probability multiset.
ConservationReport check_uncertainty_conservation(const GeneralizedPermutation& p, const StateVector& psi,
                                                  std::uint64_t steps, double tol = kShuffleTol,
                                                  MultisetComparison cmp = MultisetComparison::sorted);

/// One application of a generic unitary; expected verdict for dense
/// unitaries on basis states is fail.
ConservationReport negative_control(const UnitaryMatrix& u, const StateVector& psi,
                                    double tol = kNegativeControlTol);

/// Born distribution after evolving e_{ontic_index} by P^steps: an exact
/// point mass, with no collapse postulate anywhere.
std::vector<double> collapse_free_measurement(const GeneralizedPermutation& p, std::size_t ontic_index,
                                              std::uint64_t steps);

enum class ConservationLaw { ontology, uncertainty };

struct TrialSuiteResult {
    std::size_t trials = 0;
    std::size_t failures = 0;
    double max_deviation = 0.0;
    // Trials whose ontological input failed to come out ontological.
    std::size_t ontology_breaks = 0;
    bool pass = false;
};

/// Seeded property suite over random pure permutations and random states
/// (every fourth trial starts from a basis state so the ontological branch
/// is exercised). Trial t draws from derive_seed(seed, t); results do not
/// depend on thread count.
TrialSuiteResult conservation_trial_suite(std::size_t dim, std::uint64_t max_steps, std::size_t trials,
                                          std::uint64_t seed, ConservationLaw law, double tol = kShuffleTol,
                                          Exec exec = Exec::parallel);

/// Seeded suite applying Haar-random unitaries to random basis states;
/// counts trials whose multiset deviation exceeds `deviation_floor`.
struct NegativeControlSuiteResult {
    std::size_t trials = 0;
    std::size_t broken = 0;  // deviation > deviation_floor
    double min_deviation = 0.0;
    double max_deviation = 0.0;
};

NegativeControlSuiteResult negative_control_suite(std::size_t dim, std::size_t trials, std::uint64_t seed,
                                                  double deviation_floor = 0.1, Exec exec = Exec::parallel);

}  // namespace ontolab
