#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace routepe {

// Number of worker threads the hardware supports; 1 when OpenMP is absent.
inline int hardware_jobs() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Runs fn(i) for i in [0, n). jobs <= 1 takes the plain serial loop, which is
// the reference path the tests compare against. Workers must only write state
// owned by their index; exceptions are captured and the lowest-index one is
// rethrown so failures do not depend on scheduling.
template <typename F>
void parallel_for(std::size_t n, int jobs, F&& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
#ifdef _OPENMP
    std::vector<std::exception_ptr> errors(n);
    #pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
#else
    for (std::size_t i = 0; i < n; ++i) fn(i);
#endif
}

}  // namespace routepe
