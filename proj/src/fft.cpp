#include "oldroyd/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "oldroyd/kernels.hpp"

namespace oldroyd::fft {

namespace {

struct PlanPair
{
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
};

// Plans are created once per (dim, n) and executed through the new-array
// interface, which FFTW documents as thread-safe. FFTW_ESTIMATE keeps the
// chosen algorithm, and therefore the rounding, identical from run to run.
class PlanCache
{
public:
    ~PlanCache()
    {
        for (auto& [key, plans] : plans_) {
            fftw_destroy_plan(plans.r2c);
            fftw_destroy_plan(plans.c2r);
        }
    }

    const PlanPair& get(int dim, int n)
    {
        std::lock_guard lock(mutex_);
        const auto key = std::make_pair(dim, n);
        if (auto it = plans_.find(key); it != plans_.end())
            return it->second;

        int dims[3] = {n, n, n};
        std::size_t points = 1;
        for (int a = 0; a < dim; ++a)
            points *= static_cast<std::size_t>(n);
        const std::size_t spectral = points / static_cast<std::size_t>(n) * static_cast<std::size_t>(n / 2 + 1);

        double* real = fftw_alloc_real(points);
        fftw_complex* cplx = fftw_alloc_complex(spectral);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        PlanPair plans;
        plans.r2c = fftw_plan_dft_r2c(dim, dims, real, cplx, flags);
        plans.c2r = fftw_plan_dft_c2r(dim, dims, cplx, real, flags);
        fftw_free(real);
        fftw_free(cplx);
        if (!plans.r2c || !plans.c2r)
            throw std::runtime_error("fft: plan creation failed");
        return plans_.emplace(key, plans).first->second;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, PlanPair> plans_;
};

PlanCache& cache()
{
    static PlanCache instance;
    return instance;
}

} // namespace

void forward(const Grid& grid, std::span<const double> in, std::span<Complex> out)
{
    if (in.size() != grid.point_count() || out.size() != grid.spectral_count())
        throw std::invalid_argument("fft::forward: size mismatch");
    const auto& plans = cache().get(grid.dim(), grid.n());
    // r2c does not modify its input for out-of-place transforms.
    fftw_execute_dft_r2c(plans.r2c, const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
}

void inverse(const Grid& grid, std::span<const Complex> in, std::span<double> out)
{
    if (in.size() != grid.spectral_count() || out.size() != grid.point_count())
        throw std::invalid_argument("fft::inverse: size mismatch");
    const auto& plans = cache().get(grid.dim(), grid.n());
    // c2r destroys its input, so work on a scratch copy.
    thread_local std::vector<Complex> scratch;
    scratch.assign(in.begin(), in.end());
    fftw_execute_dft_c2r(plans.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
    const double scale = 1.0 / static_cast<double>(grid.point_count());
    kernels::for_each_index(out.size(), [&](std::size_t i) { out[i] *= scale; });
}

} // namespace oldroyd::fft
