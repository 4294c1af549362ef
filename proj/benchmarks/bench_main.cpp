#include "bkgtfk/gtfk.hpp"
#include "bkgtfk/mc.hpp"
#include "bkgtfk/nn.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace bkgtfk;

namespace {

const ModelCalibration kMean(0.2199, 0.0469, 0.6415, 0.0401);

void BM_GtfkPrice(benchmark::State& state) {
    EngineSettings s;
    s.quad.nodes = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(gtfk_price(kMean, 5.0, s));
}
BENCHMARK(BM_GtfkPrice)->Arg(101)->Arg(401)->Arg(801)->Unit(benchmark::kMicrosecond);

void BM_CorrectedPrice(benchmark::State& state) {
    const auto net = make_network(NormalizationStats::reference(), {}, 1);
    for (auto _ : state) benchmark::DoNotOptimize(corrected_price(kMean, 5.0, net));
}
BENCHMARK(BM_CorrectedPrice)->Unit(benchmark::kMicrosecond);

void BM_SolveSelfConsistent(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(solve_self_consistent(std::log(0.0469), kMean, 10.0, 1.0));
}
BENCHMARK(BM_SolveSelfConsistent);

void BM_McZcb(benchmark::State& state) {
    McConfig cfg;
    cfg.n_paths = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(mc_zcb_price(kMean, 1.0, cfg).value);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_McZcb)->Arg(1 << 12)->Arg(1 << 15)->Unit(benchmark::kMillisecond);

void BM_Forward(benchmark::State& state) {
    const auto net = make_network(NormalizationStats::reference(), {{8}, 4, 0.01, true}, 1);
    for (auto _ : state) benchmark::DoNotOptimize(forward(net, kMean, 5.0));
}
BENCHMARK(BM_Forward);

}  // namespace

BENCHMARK_MAIN();
