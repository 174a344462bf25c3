#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace oldroyd::kernels {

/// Execution policy for the data-parallel loops. `serial` is the reference
/// path; `parallel` must produce bitwise-identical results.
enum class Exec { serial, parallel };

Exec default_exec() noexcept;
void set_default_exec(Exec exec) noexcept;

/// Worker cap. Initialised from OLDROYD_LAB_THREADS when set.
int max_threads() noexcept;
void set_max_threads(int threads) noexcept;

/// Loops shorter than this stay serial even under Exec::parallel.
inline constexpr std::size_t kParallelThreshold = 4096;

template <class F>
void for_each_index(std::size_t count, F&& body, Exec exec = default_exec())
{
#ifdef _OPENMP
    if (exec == Exec::parallel && count >= kParallelThreshold && max_threads() > 1) {
        const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static) num_threads(max_threads())
        for (std::ptrdiff_t i = 0; i < n; ++i)
            body(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)exec;
#endif
    for (std::size_t i = 0; i < count; ++i)
        body(i);
}

} // namespace oldroyd::kernels
