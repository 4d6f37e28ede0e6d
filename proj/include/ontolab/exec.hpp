#pragma once

// Execution policy for the data-parallel kernels. Every kernel has a plain
// serial loop (the reference used in tests) and an OpenMP loop; both produce
// bit-identical output because all reductions are over fixed batch grids.

#include <cstddef>

namespace ontolab {

enum class Exec { serial, parallel };

/// Runs f(i) for i in [0, n). The parallel path uses OpenMP with dynamic
/// scheduling; f must write only to per-index slots.
template <class F>
void for_each_index(std::size_t n, Exec exec, F&& f) {
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            f(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) f(i);
    }
}

}  // namespace ontolab
