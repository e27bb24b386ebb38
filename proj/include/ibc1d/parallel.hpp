#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ibc {

/// OpenMP-backed index loop; plain loop when compiled without OpenMP.
/// Thread count follows OMP_NUM_THREADS.
template <class F>
void parallel_for(std::ptrdiff_t n, F&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        body(i);
#else
    for (std::ptrdiff_t i = 0; i < n; ++i)
        body(i);
#endif
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace ibc
