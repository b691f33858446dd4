#include <benchmark/benchmark.h>

#include "aht/background.hpp"
#include "aht/oracle.hpp"
#include "aht/random_field.hpp"

namespace {

aht::SampledMap make_instance(int n, int stride) {
    const aht::Grid g = aht::make_grid(n);
    const auto bg = aht::BackgroundMap::make(aht::identity2(), aht::ScalarField(g));
    const aht::VectorField z0 = aht::random_field(g, 42, 0.02, 4.0);
    return aht::sample_map(z0, bg, stride);
}

void BM_AssignmentExact(benchmark::State& state) {
    const auto m = make_instance(64, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(aht::assignment_exact(m));
    }
    state.SetLabel(std::to_string(m.size()) + " samples");
}
BENCHMARK(BM_AssignmentExact)->Arg(8)->Arg(4)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Sinkhorn(benchmark::State& state) {
    const auto m = make_instance(64, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(aht::sinkhorn(m, 1e-2, 50, 1e-6));
    }
    state.SetLabel(std::to_string(m.size()) + " samples");
}
BENCHMARK(BM_Sinkhorn)->Arg(8)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
