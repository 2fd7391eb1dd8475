#include <benchmark/benchmark.h>

#include <vector>

#include "bathforge/correlations.hpp"
#include "bathforge/memory.hpp"
#include "bathforge/renorm.hpp"
#include "bathforge/response.hpp"
#include "bathforge/spectroscopy.hpp"

using namespace bathforge;

namespace {

const QualityCalibration& regime() {
    static const QualityCalibration cal = calibrate_to_quality(-2.30, 1.0, 215.0, 1.0);
    return cal;
}

}  // namespace

static void BM_SelfEnergy(benchmark::State& state) {
    const auto& spec = regime().spec;
    const double w = static_cast<double>(state.range(0)) / 100.0;
    for (auto _ : state) benchmark::DoNotOptimize(self_energy(spec, w).re);
}
BENCHMARK(BM_SelfEnergy)->Arg(10)->Arg(100)->Arg(300);

static void BM_KernelClosedForm(benchmark::State& state) {
    const auto& spec = regime().spec;
    for (auto _ : state) benchmark::DoNotOptimize(dissipation_kernel(spec, 7.5));
}
BENCHMARK(BM_KernelClosedForm);

static void BM_KernelQuadrature(benchmark::State& state) {
    const auto& spec = regime().spec;
    for (auto _ : state) benchmark::DoNotOptimize(dissipation_kernel_oracle(spec, 7.5));
}
BENCHMARK(BM_KernelQuadrature);

static void BM_DressedMass(benchmark::State& state) {
    const auto& spec = regime().spec;
    const Resonator res;
    for (auto _ : state) benchmark::DoNotOptimize(dressed_mass(spec, res));
}
BENCHMARK(BM_DressedMass);

static void BM_CorrelationEngineBuild(benchmark::State& state) {
    const auto& spec = regime().spec;
    const auto res = anchored_resonator(spec, 1.0, 100.0);
    for (auto _ : state) {
        const CorrelationEngine engine(spec, res);
        benchmark::DoNotOptimize(engine.node_count());
    }
}
BENCHMARK(BM_CorrelationEngineBuild)->Unit(benchmark::kMillisecond);

static void BM_CorrelationEval(benchmark::State& state) {
    const auto& spec = regime().spec;
    const auto res = anchored_resonator(spec, 1.0, 100.0);
    const CorrelationEngine engine(spec, res);
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(engine.position(t, CorrelationMode::FullQuantum));
        t += 0.01;
    }
}
BENCHMARK(BM_CorrelationEval);

static void BM_ReconstructionRoundTrip(benchmark::State& state) {
    const auto& spec = regime().spec;
    const auto res = anchored_resonator(spec, 1.0, 1.0);
    const auto probe = default_probe(1.0);
    std::vector<double> grid(200);
    for (int i = 0; i < 200; ++i) grid[i] = 0.1 + 2.9 * i / 199.0;
    const BareParameters bare{res.mass, res.omega_0, stiffness_shift(spec)};
    for (auto _ : state) {
        const auto records = synthesize_records(spec, res, probe, grid, {1.0, 0.0}, 0.0);
        benchmark::DoNotOptimize(reconstruct(probe, records, bare).points.size());
    }
}
BENCHMARK(BM_ReconstructionRoundTrip)->Unit(benchmark::kMillisecond);
