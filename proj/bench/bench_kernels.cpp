#include <benchmark/benchmark.h>

#include "owm/exponents.hpp"
#include "owm/simulate.hpp"

namespace {

using owm::Execution;

owm::TrialConfig fn_config(std::size_t n) {
    owm::TrialConfig c;
    c.n = n;
    c.trials = 20000;
    c.params = owm::SystemParams::make(1.0, 0.55, 2.0, 0.6);
    c.master_seed = 7;
    return c;
}

template <Execution E>
void BM_SimulateFn(benchmark::State& state) {
    auto config = fn_config(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(owm::simulate_fn(config, E));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(config.trials));
}

template <Execution E>
void BM_SimulateFp(benchmark::State& state) {
    auto config = fn_config(static_cast<std::size_t>(state.range(0)));
    config.embedder = owm::EmbedderKind::none;
    for (auto _ : state) {
        benchmark::DoNotOptimize(owm::simulate_fp(config, E));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(config.trials));
}

template <Execution E>
void BM_GridRq(benchmark::State& state) {
    const auto params = owm::SystemParams::make(1.0, 0.5, 1.0, 0.3);
    const int side = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(owm::efn_grid_rq(params, {side, side}, E));
    }
}

template <Execution E>
void BM_GridRAlpha(benchmark::State& state) {
    const auto params = owm::SystemParams::make(1.0, 0.5, 1.0, 0.3);
    const int side = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(owm::efn_grid_r_alpha(params, {side, side / 4}, E));
    }
}

}  // namespace

BENCHMARK(BM_SimulateFn<Execution::serial>)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateFn<Execution::parallel>)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateFp<Execution::serial>)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateFp<Execution::parallel>)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridRq<Execution::serial>)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridRq<Execution::parallel>)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridRAlpha<Execution::serial>)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridRAlpha<Execution::parallel>)->Arg(400)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
