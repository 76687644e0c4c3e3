#include "pwlab/threads.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pwlab {

namespace {

int resolve_worker_count() {
#ifdef _OPENMP
    int n = omp_get_max_threads();
    if (const char* env = std::getenv("PWLAB_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap > 0 && cap < n) n = cap;
        } catch (...) {
            // unparsable cap falls back to the hardware default
        }
    }
    return n > 0 ? n : 1;
#else
    return 1;
#endif
}

} // namespace

int worker_count() {
    static const int n = resolve_worker_count();
    return n;
}

} // namespace pwlab
