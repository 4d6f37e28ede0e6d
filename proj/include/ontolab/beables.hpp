#pragma once

// Operator-level tools: Heisenberg evolution, commutators, beable-set
// verification, and the light-cone commutator scan on the bit-shift
// automaton.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ontolab/evolution.hpp"
#include "ontolab/exec.hpp"

namespace ontolab {

inline constexpr double kHermiticityTol = 1e-12;

/// Hermitian matrix on the universe's state space; a candidate beable.
struct Observable {
    Observable(CMatrix m, std::string label);
    CMatrix entries;
    std::string label;
    std::size_t dim() const { return static_cast<std::size_t>(entries.rows()); }
};

/// Bit-flip at one site of a 2^sites bit ring: identity elsewhere. Site 0 is
/// the least significant bit, matching bit_shift_universe.
Observable x_at(std::size_t site, std::size_t sites);

/// +1/-1 readout of one site's bit (+1 for bit 0).
Observable z_at(std::size_t site, std::size_t sites);

/// The full diagonal set: one basis projector |i><i| per index.
std::vector<Observable> basis_projectors(std::size_t dim);

/// One ring of sites with a declared signal speed (sites per step) and drift
/// direction (+1: the bit at x moves to x+1, as in bit_shift_universe).
struct SiteGeometry {
    SiteGeometry(std::size_t sites, std::size_t speed = 1, int drift = +1);
    std::size_t sites;
    std::size_t speed;
    int drift;

    /// Ring distance min(|dx|, sites - |dx|).
    std::size_t distance(std::size_t x, std::size_t xp) const;
};

/// A(t) = U^{-t} A U^{t}; t may be negative.
Observable heisenberg(const Observable& a, const UnitaryMatrix& u, std::int64_t t);

/// Same map under a permutation law, computed by index relabeling in
/// O(dim^2) instead of matrix products.
Observable heisenberg(const Observable& a, const GeneralizedPermutation& p, std::int64_t t);

/// max-entry norm of AB - BA. Diagonal operands short-circuit the dense
/// products (a diagonal pair commutes identically).
double commutator_norm(const Observable& a, const Observable& b);

struct BeableWitness {
    std::size_t i = 0;
    std::size_t j = 0;
    std::int64_t s = 0;
    std::int64_t t = 0;
    double commutator = 0.0;
};

struct BeableVerdict {
    bool pass = false;
    std::optional<BeableWitness> witness;  // first violation found
};

/// pass iff all pairs commute at all time pairs 0 <= s,t <= horizon. When U
/// has permutation structure the scan runs over time differences only:
/// max-entry norms are invariant under permutation conjugation.
BeableVerdict is_beable_set(const std::vector<Observable>& ops, const UnitaryMatrix& u,
                            std::uint64_t horizon, double tol = 1e-10, Exec exec = Exec::parallel);

BeableVerdict is_beable_set(const std::vector<Observable>& ops, const GeneralizedPermutation& p,
                            std::uint64_t horizon, double tol = 1e-10, Exec exec = Exec::parallel);

/// period(P) when it is at most 64, else 64: bounded runtime with documented
/// truncation.
std::uint64_t default_horizon(const GeneralizedPermutation& p);

enum class Separation { spacelike, lightlike, timelike };

const char* to_string(Separation s);

struct ConeResult {
    Separation separation = Separation::spacelike;
    double commutator = 0.0;
    // Directed refinement: the two events share a drift characteristic, i.e.
    // the one-way signal actually connects them. Metadata, not part of the
    // undirected classification.
    bool causal_contact = false;
};

/// Classifies the separation of (x,t) and (x',t') on the ring (undirected
/// cone: spacelike iff distance > |dt|*speed) and evaluates the Heisenberg
/// commutator norm of probe A at (x,t) against probe B at (x',t').
ConeResult light_cone_check(const SiteGeometry& g, const UnitaryMatrix& u, const Observable& a,
                            std::size_t x, std::int64_t t, const Observable& b, std::size_t xp,
                            std::int64_t tp);

/// One row of the exhaustive cone map.
struct ConeMapRow {
    std::size_t x, xp;
    std::int64_t t, tp;
    std::string probe_a, probe_b;
    Separation separation;
    double commutator;
    bool causal_contact;
};

/// Scans all site pairs, X/Z probe combinations and 0 <= t,t' <= t_max on
/// bit_shift_universe(sites).
std::vector<ConeMapRow> cone_map(std::size_t sites, std::int64_t t_max, Exec exec = Exec::parallel);

}  // namespace ontolab
