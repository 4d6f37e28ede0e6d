// Serial-vs-OpenMP comparison for the data-parallel kernels: Monte Carlo
// correlation, conservation trial suite, and the light-cone scan. Outputs
// are checked for exact agreement while timing both paths.

#include <chrono>
#include <cstdio>

#include "ontolab/beables.hpp"
#include "ontolab/bell.hpp"
#include "ontolab/conservation.hpp"

using namespace ontolab;
using Clock = std::chrono::steady_clock;

namespace {

template <class F>
double time_of(F&& f) {
    const auto t0 = Clock::now();
    f();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-28s serial %8.3fs   openmp %8.3fs   speedup %4.2fx   identical %s\n", name,
                serial, parallel, serial / parallel, identical ? "yes" : "NO");
}

}  // namespace

int main() {
    {
        CorrelationEstimate s, p;
        const double ts = time_of([&] { s = correlation_montecarlo(0.0, 0.3926990816987241, 8000000, 42, Exec::serial); });
        const double tp = time_of([&] { p = correlation_montecarlo(0.0, 0.3926990816987241, 8000000, 42, Exec::parallel); });
        report("bell monte carlo (8e6)", ts, tp, s.value == p.value && s.std_error == p.std_error);
    }
    {
        TrialSuiteResult s, p;
        const double ts = time_of([&] { s = conservation_trial_suite(256, 1000, 1000, 7, ConservationLaw::ontology, kShuffleTol, Exec::serial); });
        const double tp = time_of([&] { p = conservation_trial_suite(256, 1000, 1000, 7, ConservationLaw::ontology, kShuffleTol, Exec::parallel); });
        report("conservation (1000 trials)", ts, tp,
               s.failures == p.failures && s.max_deviation == p.max_deviation);
    }
    {
        std::vector<ConeMapRow> s, p;
        const double ts = time_of([&] { s = cone_map(6, 6, Exec::serial); });
        const double tp = time_of([&] { p = cone_map(6, 6, Exec::parallel); });
        bool same = s.size() == p.size();
        for (std::size_t i = 0; same && i < s.size(); ++i)
            same = s[i].commutator == p[i].commutator && s[i].separation == p[i].separation;
        report("light-cone scan (L=6)", ts, tp, same);
    }
    {
        BeableVerdict s, p;
        Rng rng(11);
        const auto perm = random_generalized_permutation(32, rng, false);
        const auto ops = basis_projectors(32);
        const double ts = time_of([&] { s = is_beable_set(ops, perm, 64, 1e-10, Exec::serial); });
        const double tp = time_of([&] { p = is_beable_set(ops, perm, 64, 1e-10, Exec::parallel); });
        report("beable scan (dim 32, h=64)", ts, tp, s.pass == p.pass);
    }
    return 0;
}
