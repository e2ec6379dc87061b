#pragma once

#include <cstddef>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cfadv {

// Execution policy for the per-instance batch loops. Work items must be
// independent and write only to their own output slot; results are then
// identical under either policy.
enum class Exec { serial, openmp };

inline Exec default_exec() {
#ifdef _OPENMP
    return Exec::openmp;
#else
    return Exec::serial;
#endif
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

template <typename F>
void parallel_for(std::size_t n, Exec exec, F&& body) {
#ifdef _OPENMP
    if (exec == Exec::openmp) {
        #pragma omp parallel for schedule(dynamic, 1)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            body(static_cast<std::size_t>(i));
        }
        return;
    }
#else
    (void)exec;
#endif
    for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace cfadv
