#include "ontolab/conservation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace ontolab {

namespace {

std::vector<double> born_multiset(const StateVector& s) {
    std::vector<double> m = born_probabilities(s);
    std::sort(m.begin(), m.end(), std::greater<double>());
    return m;
}

double aligned_deviation(const GeneralizedPermutation& p, const StateVector& before,
                         const StateVector& after, std::uint64_t steps, bool squared) {
    double worst = 0.0;
    for (std::size_t i = 0; i < before.dim(); ++i) {
        const std::size_t image = evolve_index(p, i, steps);
        const double a = squared ? std::norm(before[i]) : std::abs(before[i]);
        const double b = squared ? std::norm(after[image]) : std::abs(after[image]);
        worst = std::max(worst, std::abs(a - b));
    }
    return worst;
}

ConservationReport run_check(const GeneralizedPermutation& p, const StateVector& psi, std::uint64_t steps,
                             double tol, MultisetComparison cmp, bool squared) {
    if (psi.dim() != p.dim()) throw std::invalid_argument("conservation check: dimension mismatch");
    const StateVector out = evolve(psi, p, steps);
    ConservationReport r;
    r.initial_class = classify_state(psi);
    r.final_class = classify_state(out);
    r.initial_multiset = squared ? born_multiset(psi) : amplitude_multiset(psi);
    r.final_multiset = squared ? born_multiset(out) : amplitude_multiset(out);
    r.max_multiset_deviation = (cmp == MultisetComparison::sorted)
                                   ? multiset_deviation(r.initial_multiset, r.final_multiset)
                                   : aligned_deviation(p, psi, out, steps, squared);
    const bool ontology_kept = !is_ontological(r.initial_class) || is_ontological(r.final_class);
    r.pass = r.max_multiset_deviation <= tol && ontology_kept;
    return r;
}

}  // namespace

ConservationReport check_ontology_conservation(const GeneralizedPermutation& p, const StateVector& psi,
                                               std::uint64_t steps, double tol, MultisetComparison cmp) {
    return run_check(p, psi, steps, tol, cmp, /*squared=*/false);
}

ConservationReport check_uncertainty_conservation(const GeneralizedPermutation& p, const StateVector& psi,
                                                  std::uint64_t steps, double tol, MultisetComparison cmp) {
    return run_check(p, psi, steps, tol, cmp, /*squared=*/true);
}

ConservationReport negative_control(const UnitaryMatrix& u, const StateVector& psi, double tol) {
    if (psi.dim() != u.dim()) throw std::invalid_argument("negative_control: dimension mismatch");
    const auto n = static_cast<Eigen::Index>(psi.dim());
    Eigen::Map<const Eigen::VectorXcd> in(psi.amplitudes().data(), n);
    Eigen::VectorXcd outv = u.entries() * in;
    const StateVector out(std::vector<Amplitude>(outv.data(), outv.data() + n));
    ConservationReport r;
    r.initial_class = classify_state(psi);
    r.final_class = classify_state(out);
    r.initial_multiset = amplitude_multiset(psi);
    r.final_multiset = amplitude_multiset(out);
    r.max_multiset_deviation = multiset_deviation(r.initial_multiset, r.final_multiset);
    const bool ontology_kept = !is_ontological(r.initial_class) || is_ontological(r.final_class);
    r.pass = r.max_multiset_deviation <= tol && ontology_kept;
    return r;
}

std::vector<double> collapse_free_measurement(const GeneralizedPermutation& p, std::size_t ontic_index,
                                              std::uint64_t steps) {
    if (!p.is_pure()) throw std::domain_error("collapse_free_measurement: pure permutation required");
    if (ontic_index >= p.dim()) throw std::invalid_argument("collapse_free_measurement: index out of range");
    std::vector<double> born(p.dim(), 0.0);
    born[evolve_index(p, ontic_index, steps)] = 1.0;
    return born;
}

TrialSuiteResult conservation_trial_suite(std::size_t dim, std::uint64_t max_steps, std::size_t trials,
                                          std::uint64_t seed, ConservationLaw law, double tol, Exec exec) {
    if (dim == 0 || trials == 0) throw std::domain_error("conservation_trial_suite: dim and trials must be positive");
    std::vector<double> deviation(trials, 0.0);
    std::vector<unsigned char> failed(trials, 0);
    std::vector<unsigned char> broke_ontology(trials, 0);

    for_each_index(trials, exec, [&](std::size_t t) {
        Rng rng(derive_seed(seed, t));
        const GeneralizedPermutation p = random_generalized_permutation(dim, rng, /*with_phases=*/false);
        const StateVector psi = (t % 4 == 3) ? StateVector::basis(dim, rng.next_index(dim))
                                             : random_state(dim, rng);
        const std::uint64_t steps =
            max_steps == 0 ? 0 : 1 + rng.next_index(static_cast<std::size_t>(max_steps));
        const ConservationReport r = (law == ConservationLaw::ontology)
                                         ? check_ontology_conservation(p, psi, steps, tol)
                                         : check_uncertainty_conservation(p, psi, steps, tol);
        deviation[t] = r.max_multiset_deviation;
        failed[t] = r.pass ? 0 : 1;
        broke_ontology[t] = (is_ontological(r.initial_class) && !is_ontological(r.final_class)) ? 1 : 0;
    });

    TrialSuiteResult out;
    out.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        out.failures += failed[t];
        out.ontology_breaks += broke_ontology[t];
        out.max_deviation = std::max(out.max_deviation, deviation[t]);
    }
    out.pass = out.failures == 0;
    return out;
}

NegativeControlSuiteResult negative_control_suite(std::size_t dim, std::size_t trials, std::uint64_t seed,
                                                  double deviation_floor, Exec exec) {
    if (dim == 0 || trials == 0) throw std::domain_error("negative_control_suite: dim and trials must be positive");
    std::vector<double> deviation(trials, 0.0);
    for_each_index(trials, exec, [&](std::size_t t) {
        Rng rng(derive_seed(seed, t));
        const UnitaryMatrix u = random_unitary(dim, rng);
        const StateVector psi = StateVector::basis(dim, rng.next_index(dim));
        deviation[t] = negative_control(u, psi).max_multiset_deviation;
    });
    NegativeControlSuiteResult out;
    out.trials = trials;
    out.min_deviation = deviation.empty() ? 0.0 : deviation[0];
    for (double d : deviation) {
        if (d > deviation_floor) ++out.broken;
        out.min_deviation = std::min(out.min_deviation, d);
        out.max_deviation = std::max(out.max_deviation, d);
    }
    return out;
}

}  // namespace ontolab
