#include <benchmark/benchmark.h>

#include "relaxosc/analytic_engine.hpp"
#include "relaxosc/characterization.hpp"
#include "relaxosc/numeric_oracle.hpp"
#include "relaxosc/sigmoid_fit.hpp"

namespace {

using namespace relaxosc;

CircuitParams fig5(double r) {
    return CircuitParams::create(SwitchParams::create(4.0, 2.0, 200.0, 40000.0), 150e-6, 10e-9, 1e-6, r);
}

void BM_LimitCycle(benchmark::State& state) {
    const CircuitParams c = fig5(static_cast<double>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(limit_cycle(c).f);
    }
}
BENCHMARK(BM_LimitCycle)->Arg(10)->Arg(190)->Arg(1000);

void BM_CrossingTime(benchmark::State& state) {
    const CircuitParams c = fig5(190.0);
    const PhasePiece p = start_piece(phase_params(c, SwitchState::Off), 0.3, 1.7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(crossing_time(p, 4.0));
    }
}
BENCHMARK(BM_CrossingTime);

void BM_SweepFig5(benchmark::State& state) {
    const CircuitParams c = fig5(0.0);
    const auto grid = linear_grid(0.0, 300.0, 301);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sweep_f_of_r(c, grid).rows.size());
    }
}
BENCHMARK(BM_SweepFig5)->Unit(benchmark::kMillisecond);

void BM_FitSigmoid(benchmark::State& state) {
    const SweepResult sweep = sweep_f_of_r(fig5(0.0), linear_grid(0.0, 300.0, 301));
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_sigmoid(sweep).rmse_rel);
    }
}
BENCHMARK(BM_FitSigmoid)->Unit(benchmark::kMillisecond);

// Ten periods of RK4 at the default step.
void BM_IntegrateRk4(benchmark::State& state) {
    const CircuitParams c = fig5(300.0);
    const double t_end = 10.0 / limit_cycle(c).f;
    IntegrationOptions opt;
    opt.t_end = t_end;
    opt.dt = default_step(c);
    opt.record_waveform = false;
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate(c, opt).spikes.size());
    }
    state.counters["steps"] = t_end / opt.dt;
}
BENCHMARK(BM_IntegrateRk4)->Unit(benchmark::kMillisecond);

void BM_IntegrateStiff(benchmark::State& state) {
    const CircuitParams c = fig5(10.0);
    const double t_end = 10.0 / limit_cycle(c).f;
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_stiff(c, t_end).steps);
    }
}
BENCHMARK(BM_IntegrateStiff)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
