#include <benchmark/benchmark.h>

#include "ncpoisson/foliation.hpp"
#include "ncpoisson/hochschild.hpp"
#include "ncpoisson/torus.hpp"

using namespace ncpoisson;

namespace {

FoliationConfig grid_config(int n)
{
    FoliationConfig fc;
    fc.p = 1;
    fc.q = 2;
    fc.n_x = n;
    fc.n_y = n;
    fc.density = "expsin";
    return fc;
}

} // namespace

static void BM_Convolve(benchmark::State& state)
{
    FoliatedTorusModel m(grid_config(static_cast<int>(state.range(0))));
    Rng rng(1);
    GroupoidKernel k1 = random_kernel(m, m.n_y() / 4, rng);
    GroupoidKernel k2 = random_kernel(m, m.n_y() / 4, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(convolve(k1, k2));
}
BENCHMARK(BM_Convolve)->Arg(16)->Arg(32);

static void BM_TransverseDifferential(benchmark::State& state)
{
    FoliatedTorusModel m(grid_config(static_cast<int>(state.range(0))));
    Rng rng(2);
    GroupoidKernel k = random_kernel(m, m.n_y() / 4, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(transverse_differential(k));
}
BENCHMARK(BM_TransverseDifferential)->Arg(16)->Arg(32);

static void BM_PoissonBracketKernels(benchmark::State& state)
{
    FoliatedTorusModel m(grid_config(static_cast<int>(state.range(0))));
    Rng rng(3);
    GroupoidKernel k1 = random_kernel(m, m.n_y() / 4, rng);
    GroupoidKernel k2 = random_kernel(m, m.n_y() / 4, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(poisson_bracket_kernels(k1, k2));
}
BENCHMARK(BM_PoissonBracketKernels)->Arg(16)->Arg(32);

static void BM_WitnessKernels(benchmark::State& state)
{
    FoliatedTorusModel m(grid_config(static_cast<int>(state.range(0))));
    Rng rng(4);
    GroupoidKernel k1 = random_kernel(m, m.n_y() / 4, rng);
    GroupoidKernel k2 = random_kernel(m, m.n_y() / 4, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(witness_kernels(k1, k2));
}
BENCHMARK(BM_WitnessKernels)->Arg(16)->Arg(32);

static void BM_DifferentialDeg3(benchmark::State& state)
{
    auto m3 = matrix_algebra(3);
    Rng rng(5);
    Cochain c = Cochain::random(m3, 3, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(differential(c));
}
BENCHMARK(BM_DifferentialDeg3);

static void BM_Gerstenhaber22(benchmark::State& state)
{
    auto m3 = matrix_algebra(3);
    Rng rng(6);
    Cochain u = Cochain::random(m3, 2, rng);
    Cochain v = Cochain::random(m3, 2, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(gerstenhaber(u, v));
}
BENCHMARK(BM_Gerstenhaber22);

static void BM_SolveCoboundaryM2(benchmark::State& state)
{
    auto m2 = matrix_algebra(2);
    Rng rng(7);
    Cochain w = differential(Cochain::random(m2, 2, rng));
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_coboundary(w));
}
BENCHMARK(BM_SolveCoboundaryM2);

static void BM_TorusMultiply(benchmark::State& state)
{
    int N = static_cast<int>(state.range(0));
    Rng rng(8);
    TorusElement a = TorusElement::random(0.618, N, N / 2, rng);
    TorusElement b = TorusElement::random(0.618, N, N / 2, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(multiply(a, b));
}
BENCHMARK(BM_TorusMultiply)->Arg(8)->Arg(16);

BENCHMARK_MAIN();
