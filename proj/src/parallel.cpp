#include "superman/parallel.hpp"

#include <atomic>

namespace superman {

namespace {
std::atomic<ExecMode> g_exec_mode{ExecMode::parallel};
} // namespace

ExecMode execution_mode() noexcept { return g_exec_mode.load(std::memory_order_relaxed); }

void set_execution_mode(ExecMode mode) noexcept {
    g_exec_mode.store(mode, std::memory_order_relaxed);
}

int max_threads() noexcept {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace superman
