#pragma once

#include <cstdlib>
#include <omp.h>

namespace persheaf::par {

// Thread budget for all parallel kernels.  PERSHEAF_THREADS caps the OpenMP
// team size; 0 or unset means "let OpenMP decide".
inline int max_threads() {
    static int cached = [] {
        const char* env = std::getenv("PERSHEAF_THREADS");
        if (env != nullptr) {
            int n = std::atoi(env);
            if (n > 0) return n;
        }
        return omp_get_max_threads();
    }();
    return cached;
}

template <class F>
void parallel_for(long n, F&& body) {
    const int nt = max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (long i = 0; i < n; ++i) body(i);
}

}  // namespace persheaf::par
