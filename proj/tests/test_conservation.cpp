#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ontolab/conservation.hpp"
#include "ontolab/io.hpp"

using namespace ontolab;
namespace {
constexpr double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}  // namespace

TEST_SUITE("conservation") {

TEST_CASE("ontological in equals ontological out") {
    const auto r = check_ontology_conservation(cogwheel(4), StateVector::basis(4, 1), 7);
    CHECK(is_ontological(r.initial_class));
    CHECK(is_ontological(r.final_class));
    CHECK(r.max_multiset_deviation == 0.0);
    CHECK(r.pass);
}

TEST_CASE("superposed state keeps its coefficient multiset") {
    const StateVector psi({Amplitude(kInvSqrt2, 0), Amplitude(0, 0), Amplitude(kInvSqrt2, 0),
                           Amplitude(0, 0)});
    const auto r = check_ontology_conservation(cogwheel(4), psi, 3);
    CHECK(!is_ontological(r.initial_class));
    CHECK(!is_ontological(r.final_class));
    CHECK(r.max_multiset_deviation == 0.0);
    CHECK(r.initial_multiset == r.final_multiset);
    CHECK(r.pass);
}

TEST_CASE("random pure permutations conserve the multiset exactly") {
    Rng rng(101);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t dim = 2 + rng.next_index(63);
        const auto p = random_generalized_permutation(dim, rng, false);
        const StateVector psi = random_state(dim, rng);
        const auto r = check_ontology_conservation(p, psi, 100);
        CHECK(r.max_multiset_deviation == 0.0);  // pure shuffles are exact
        CHECK(r.pass);

        // The strict variant (aligned through the known permutation) is
        // equally exact.
        const auto rs = check_ontology_conservation(p, psi, 100, kShuffleTol,
                                                    MultisetComparison::aligned);
        CHECK(rs.max_multiset_deviation == 0.0);
    }
}

TEST_CASE("phased permutations conserve within round-off over 1000 steps") {
    Rng rng(113);
    const auto p = random_generalized_permutation(64, rng, true);
    const StateVector psi = random_state(64, rng);
    const auto r = check_ontology_conservation(p, psi, 1000, kShuffleTol);
    CHECK(r.max_multiset_deviation <= 1e-12);
    CHECK(r.pass);
}

TEST_CASE("uncertainty law: probability multiset is conserved") {
    const StateVector psi({Amplitude(std::sqrt(0.36), 0), Amplitude(0, std::sqrt(0.64)),
                           Amplitude(0, 0)});
    const auto r = check_uncertainty_conservation(cogwheel(3), psi, 5);
    CHECK(r.initial_multiset[0] == doctest::Approx(0.64).epsilon(1e-14));
    CHECK(r.initial_multiset[1] == doctest::Approx(0.36).epsilon(1e-14));
    CHECK(r.max_multiset_deviation == 0.0);
    CHECK(r.pass);

    const auto pm = check_uncertainty_conservation(cogwheel(6), StateVector::basis(6, 2), 11);
    CHECK(pm.final_multiset[0] == 1.0);
    CHECK(pm.max_multiset_deviation == 0.0);
    CHECK(pm.pass);
}

TEST_CASE("born distribution of the evolved state is the permuted initial one") {
    Rng rng(131);
    const auto p = random_generalized_permutation(32, rng, false);
    const StateVector psi = random_state(32, rng);
    const std::uint64_t steps = 17;
    const auto before = born_probabilities(psi);
    const auto after = born_probabilities(evolve(psi, p, steps));
    for (std::size_t i = 0; i < 32; ++i) CHECK(after[evolve_index(p, i, steps)] == before[i]);
}

TEST_CASE("negative control: a pi/4 rotation breaks conservation") {
    CMatrix rot(2, 2);
    rot << std::cos(kPi / 4), -std::sin(kPi / 4), std::sin(kPi / 4), std::cos(kPi / 4);
    const auto u = UnitaryMatrix::from_dense(rot);
    const auto r = negative_control(u, StateVector::basis(2, 0));
    CHECK(!r.pass);
    CHECK(r.max_multiset_deviation >= 0.29);
    // Sorted multisets (1, 0) vs (0.7071, 0.7071): the max gap sits on the
    // second element.
    CHECK(r.max_multiset_deviation == doctest::Approx(kInvSqrt2).epsilon(1e-12));
    CHECK(r.initial_multiset[0] - r.final_multiset[0] ==
          doctest::Approx(1.0 - kInvSqrt2).epsilon(1e-12));
    CHECK(is_ontological(r.initial_class));
    CHECK(!is_ontological(r.final_class));
}

TEST_CASE("negative control: balanced unitary breaks conservation") {
    CMatrix had(2, 2);
    had << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
    const auto r = negative_control(UnitaryMatrix::from_dense(had), StateVector::basis(2, 0));
    CHECK(!r.pass);
    CHECK(r.max_multiset_deviation > 0.29);
}

TEST_CASE("negative control suite: dense unitaries break conservation generically") {
    const auto r = negative_control_suite(16, 200, 42);
    CHECK(r.trials == 200);
    CHECK(r.broken == 200);  // at dim 16 every Haar column is far from a point mass
    CHECK(r.min_deviation > 0.1);
}

TEST_CASE("collapse-free measurement gives exact point masses") {
    const auto born = collapse_free_measurement(cogwheel(5), 2, 3);
    CHECK(born == std::vector<double>{1, 0, 0, 0, 0});  // (2+3) mod 5 = 0

    // One full period brings the point mass home.
    Rng rng(7);
    const auto p = random_generalized_permutation(24, rng, false);
    const auto home = collapse_free_measurement(p, 13, period(p));
    CHECK(home[13] == 1.0);

    // Bit-shift universe: configuration 4 rotates to 1 after one step.
    const auto rotated = collapse_free_measurement(bit_shift_universe(3), 4, 1);
    CHECK(rotated[1] == 1.0);

    CHECK_THROWS_AS(collapse_free_measurement(GeneralizedPermutation({0, 1}, {0.1, 0.0}), 0, 1),
                    std::domain_error);
}

TEST_CASE("trial suites are seed-deterministic and thread-count independent") {
    const auto a = conservation_trial_suite(32, 50, 64, 77, ConservationLaw::ontology, kShuffleTol,
                                            Exec::serial);
    const auto b = conservation_trial_suite(32, 50, 64, 77, ConservationLaw::ontology, kShuffleTol,
                                            Exec::parallel);
    CHECK(a.trials == b.trials);
    CHECK(a.failures == b.failures);
    CHECK(a.max_deviation == b.max_deviation);
    CHECK(a.ontology_breaks == b.ontology_breaks);
    CHECK(a.pass);
    CHECK(a.max_deviation == 0.0);

    const auto c = negative_control_suite(8, 64, 5, 0.1, Exec::serial);
    const auto d = negative_control_suite(8, 64, 5, 0.1, Exec::parallel);
    CHECK(c.broken == d.broken);
    CHECK(c.min_deviation == d.min_deviation);
    CHECK(c.max_deviation == d.max_deviation);
}

TEST_CASE("uncertainty suite passes like the ontology suite") {
    const auto r = conservation_trial_suite(16, 100, 128, 3, ConservationLaw::uncertainty);
    CHECK(r.pass);
    CHECK(r.max_deviation == 0.0);
    CHECK(r.ontology_breaks == 0);
}

TEST_CASE("report serialization uses the documented field names") {
    const auto r = check_ontology_conservation(cogwheel(4), StateVector::basis(4, 1), 2);
    const Json j = conservation_report_to_json(r);
    CHECK(j.contains("initial_class"));
    CHECK(j.contains("final_class"));
    CHECK(j.contains("deviation"));
    CHECK(j.at("verdict") == "pass");
    CHECK(j.at("initial_class").at("type") == "ontological");
    CHECK(j.at("initial_class").at("index") == 1);
    CHECK(j.size() == 4);
}

TEST_CASE("dimension mismatches are rejected") {
    CHECK_THROWS_AS(check_ontology_conservation(cogwheel(3), StateVector::basis(4, 0), 1),
                    std::invalid_argument);
    Rng rng(1);
    CHECK_THROWS_AS(negative_control(random_unitary(4, rng), StateVector::basis(3, 0)),
                    std::invalid_argument);
}

}  // TEST_SUITE
