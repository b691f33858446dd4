#include <benchmark/benchmark.h>

#include "aht/background.hpp"
#include "aht/dynamics.hpp"
#include "aht/leray.hpp"
#include "aht/ops.hpp"
#include "aht/random_field.hpp"

namespace {

void BM_LerayProject(benchmark::State& state) {
    const aht::Grid g = aht::make_grid(static_cast<int>(state.range(0)));
    const aht::VectorField z = aht::random_field(g, 11, 1.0, 4.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(aht::leray_project(z));
    }
}
BENCHMARK(BM_LerayProject)->Arg(64)->Arg(128)->Arg(256);

void BM_Advect(benchmark::State& state) {
    const aht::Grid g = aht::make_grid(static_cast<int>(state.range(0)));
    const aht::VectorField u = aht::leray_project(aht::random_field(g, 5, 1.0, 4.0));
    const aht::VectorField w = aht::random_field(g, 6, 1.0, 4.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(aht::advect(u, w));
    }
}
BENCHMARK(BM_Advect)->Arg(64)->Arg(128)->Arg(256);

void BM_Rk4StepNonlinear(benchmark::State& state) {
    const aht::Grid g = aht::make_grid(static_cast<int>(state.range(0)));
    const auto bg = aht::BackgroundMap::make(aht::identity2(), aht::ScalarField(g));
    aht::SimState st = aht::make_state(aht::random_field(g, 11, 0.01, 4.0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(aht::step_rk4(st, 0.01, bg, aht::RhsMode::nonlinear));
    }
}
BENCHMARK(BM_Rk4StepNonlinear)->Arg(64)->Arg(128);

void BM_CommutatorAdvection(benchmark::State& state) {
    const aht::Grid g = aht::make_grid(static_cast<int>(state.range(0)));
    const aht::VectorField u = aht::leray_project(aht::random_field(g, 21, 1.0, 4.0));
    const aht::VectorField z = aht::random_field(g, 22, 1.0, 4.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(aht::commutator_advection(u, z));
    }
}
BENCHMARK(BM_CommutatorAdvection)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
