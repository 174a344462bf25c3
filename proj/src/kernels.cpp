#include "oldroyd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace oldroyd::kernels {

namespace {

int initial_threads()
{
    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    if (const char* env = std::getenv("OLDROYD_LAB_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1 && cap < threads)
                threads = cap;
        } catch (...) {
            // ignore malformed values
        }
    }
    return threads;
}

std::atomic<Exec> g_exec{Exec::parallel};
std::atomic<int> g_threads{initial_threads()};

} // namespace

Exec default_exec() noexcept { return g_exec.load(std::memory_order_relaxed); }

void set_default_exec(Exec exec) noexcept { g_exec.store(exec, std::memory_order_relaxed); }

int max_threads() noexcept { return g_threads.load(std::memory_order_relaxed); }

void set_max_threads(int threads) noexcept
{
    g_threads.store(threads < 1 ? 1 : threads, std::memory_order_relaxed);
}

} // namespace oldroyd::kernels
