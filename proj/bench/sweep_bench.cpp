#include <benchmark/benchmark.h>

#include "stacharge/experiments.hpp"

using namespace stacharge;

namespace {

SweepSpec tau_spec(std::size_t points) {
    return {.variable = SweepVariable::TauC,
            .values = log_spaced(0.1, 50.0, points),
            .base = {Protocol::STA, PulseSpec::gaussian(1.0, 7.2)},
            .base_decoherence = {},
            .samples_per_run = 200,
            .integrator = {}};
}

SweepSpec gamma_spec(std::size_t points) {
    SweepSpec s = tau_spec(points);
    s.variable = SweepVariable::GammaMinus;
    s.values = log_spaced(1e-4, 1e-1, points);
    return s;
}

template <Execution E>
void BM_SweepTau(benchmark::State& state) {
    const auto spec = tau_spec(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sweep_tau(spec, E));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <Execution E>
void BM_SweepGamma(benchmark::State& state) {
    const auto spec = gamma_spec(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(sweep_gamma(spec, DecoherenceChannel::Dissipation, E));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_SweepTau<Execution::Serial>)->Arg(40)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepTau<Execution::Parallel>)->Arg(40)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepGamma<Execution::Serial>)->Arg(40)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepGamma<Execution::Parallel>)->Arg(40)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
