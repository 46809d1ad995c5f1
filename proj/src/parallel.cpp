#include "detlab/parallel.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace detlab {

namespace {
std::atomic<ExecMode> g_mode{
#ifdef _OPENMP
    ExecMode::openmp
#else
    ExecMode::serial
#endif
};
}  // namespace

ExecMode default_exec_mode() { return g_mode.load(); }

void set_default_exec_mode(ExecMode m) { g_mode.store(m); }

int worker_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace detlab
