// Serial reference path against the OpenMP path for the pointwise kernels,
// one tendency evaluation and one full integrator step.

#include <benchmark/benchmark.h>

#include <numbers>

#include "oldroyd/initial_data.hpp"
#include "oldroyd/integrator.hpp"
#include "oldroyd/kernels.hpp"
#include "oldroyd/models.hpp"

using namespace oldroyd;

namespace {

kernels::Exec exec_of(const benchmark::State& st)
{
    return st.range(1) ? kernels::Exec::parallel : kernels::Exec::serial;
}

State data(Formulation f, int n)
{
    cli::InitSpec spec;
    spec.amplitude = 1e-2;
    return cli::initial_data(spec, f, Grid(2, n, 2 * std::numbers::pi), PhysParams{});
}

void label(benchmark::State& st)
{
    st.SetLabel(st.range(1) ? "openmp x" + std::to_string(kernels::max_threads()) : "serial");
}

void BM_Pressure(benchmark::State& st)
{
    kernels::set_default_exec(exec_of(st));
    const auto s = std::get<TorusState>(data(Formulation::torus, static_cast<int>(st.range(0))));
    ScalarField rho = s.eta;
    for (auto _ : st)
        benchmark::DoNotOptimize(models::pressure(rho, PhysParams{}));
    label(st);
}

void BM_RhsCauchy(benchmark::State& st)
{
    kernels::set_default_exec(exec_of(st));
    const State s = data(Formulation::cauchy, static_cast<int>(st.range(0)));
    for (auto _ : st)
        benchmark::DoNotOptimize(models::rhs(s, PhysParams{}));
    label(st);
}

void BM_StepTorus(benchmark::State& st)
{
    kernels::set_default_exec(exec_of(st));
    const State s = data(Formulation::torus, static_cast<int>(st.range(0)));
    const PhysParams p;
    const integrate::LinearPropagator prop(Formulation::torus, grid_of(s), p, 1e-3);
    for (auto _ : st)
        benchmark::DoNotOptimize(integrate::step(s, p, prop));
    label(st);
}

void sizes(benchmark::internal::Benchmark* b)
{
    for (int n : {64, 128, 256})
        for (int par : {0, 1})
            b->Args({n, par});
    b->ArgNames({"n", "omp"})->Unit(benchmark::kMillisecond);
}

} // namespace

BENCHMARK(BM_Pressure)->Apply(sizes);
BENCHMARK(BM_RhsCauchy)->Apply(sizes);
BENCHMARK(BM_StepTorus)->Apply(sizes);

BENCHMARK_MAIN();
