#include <benchmark/benchmark.h>

#include <cmath>

#include "bathforge/numerics.hpp"

using namespace bathforge;

static void BM_Gamma(benchmark::State& state) {
    double x = 0.37;
    for (auto _ : state) {
        benchmark::DoNotOptimize(numerics::gamma_fn(x));
        x = x < 20.0 ? x + 0.731 : 0.37;
    }
}
BENCHMARK(BM_Gamma);

static void BM_BesselK(benchmark::State& state) {
    const double nu = 3.8;
    const double x = static_cast<double>(state.range(0)) / 10.0;
    for (auto _ : state) benchmark::DoNotOptimize(numerics::bessel_k(nu, x));
}
BENCHMARK(BM_BesselK)->Arg(5)->Arg(20)->Arg(100)->Arg(400);

static void BM_Integrate(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(numerics::integrate([](double x) { return std::exp(-x) * std::cos(3.0 * x); }, 0.0, 40.0));
    }
}
BENCHMARK(BM_Integrate);
