#pragma once

#include <cstddef>
#include <exception>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace superman {

enum class ExecMode { serial, parallel };

ExecMode execution_mode() noexcept;
void set_execution_mode(ExecMode mode) noexcept;
int max_threads() noexcept;

class ScopedExecMode {
public:
    explicit ScopedExecMode(ExecMode mode) : previous_(execution_mode()) {
        set_execution_mode(mode);
    }
    ~ScopedExecMode() { set_execution_mode(previous_); }
    ScopedExecMode(const ScopedExecMode&) = delete;
    ScopedExecMode& operator=(const ScopedExecMode&) = delete;

private:
    ExecMode previous_;
};

// Runs fn(i) for i in [0, n). Uses OpenMP when the global mode is parallel
// and the trip count clears min_parallel; exceptions thrown by fn are
// captured and rethrown on the calling thread.
template <typename F>
void parallel_for(std::size_t n, F&& fn, std::size_t min_parallel = 2) {
#ifdef _OPENMP
    if (execution_mode() == ExecMode::parallel && n >= min_parallel && max_threads() > 1) {
        std::exception_ptr first_error = nullptr;
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                fn(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical(superman_parallel_for_error)
                {
                    if (!first_error) first_error = std::current_exception();
                }
            }
        }
        if (first_error) std::rethrow_exception(first_error);
        return;
    }
#endif
    (void)min_parallel;
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

} // namespace superman
