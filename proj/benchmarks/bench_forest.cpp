#include <benchmark/benchmark.h>

#include "rsf/eval.hpp"
#include "rsf/forest.hpp"
#include "rsf/synth.hpp"

using namespace rsf;

namespace {

void bench_fit_setseq(benchmark::State& state) {
    SynthConfig cfg;
    cfg.n_examples = static_cast<std::size_t>(state.range(0));
    cfg.mean_length = 10;
    cfg.mean_set_size = 10;
    cfg.vocab_size = 30;
    cfg.mode = SynthMode::Order;
    const auto ds = generate(cfg);
    Hyperparams hp;
    hp.max_trees = 25;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit(ds, hp));
    }
}
BENCHMARK(bench_fit_setseq)->Unit(benchmark::kMillisecond)->Arg(100)->Arg(200);

void bench_fit_numeric_fast_vs_general(benchmark::State& state) {
    SynthConfig cfg;
    cfg.n_examples = 200;
    cfg.mean_length = 10;
    cfg.mean_set_size = 10;
    cfg.vocab_size = 30;
    cfg.mode = SynthMode::Items;
    const auto ds = bag_of_items(generate(cfg), 0);
    Hyperparams hp;
    hp.max_trees = 25;
    hp.numeric_fast_path = state.range(0) != 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit(ds, hp));
    }
}
BENCHMARK(bench_fit_numeric_fast_vs_general)->Unit(benchmark::kMillisecond)->Arg(0)->Arg(1);

void bench_repeated_cv(benchmark::State& state) {
    SynthConfig cfg;
    cfg.n_examples = 120;
    cfg.mean_length = 8;
    cfg.mean_set_size = 8;
    cfg.vocab_size = 30;
    cfg.mode = SynthMode::Order;
    const auto ds = generate(cfg);
    Hyperparams hp;
    hp.max_trees = 25;
    for (auto _ : state) {
        benchmark::DoNotOptimize(repeated_cv(ds, hp, 2, 2, 1));
    }
}
BENCHMARK(bench_repeated_cv)->Unit(benchmark::kMillisecond);

}  // namespace
