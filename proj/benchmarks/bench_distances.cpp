#include <benchmark/benchmark.h>

#include "rsf/distances.hpp"
#include "rsf/rng.hpp"
#include "rsf/synth.hpp"

using namespace rsf;

namespace {

TimeSeries make_series(Rng& rng, std::size_t length) {
    TimeSeries ts(length);
    for (auto& v : ts) v = rng.uniform01();
    return ts;
}

GraphValue make_random_graph(Rng& rng, std::uint32_t nodes) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i < nodes; ++i) {
        for (std::uint32_t j = i + 1; j < nodes; ++j) {
            if (rng.uniform01() < 0.3) edges.emplace_back(i, j);
        }
    }
    return make_graph(nodes, std::move(edges));
}

void bench_dtw(benchmark::State& state) {
    Rng rng(1);
    const auto a = make_series(rng, static_cast<std::size_t>(state.range(0)));
    const auto b = make_series(rng, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(dtw_distance(a, b));
    }
}
BENCHMARK(bench_dtw)->Arg(32)->Arg(128)->Arg(512);

void bench_seqset_edit(benchmark::State& state) {
    SynthConfig cfg;
    cfg.n_examples = 2;
    cfg.mean_length = static_cast<double>(state.range(0));
    cfg.mean_set_size = 20;
    cfg.mode = SynthMode::Order;
    const auto ds = generate(cfg);
    const auto& s = std::get<SetSequence>(ds.columns[0].values[0]);
    const auto& t = std::get<SetSequence>(ds.columns[0].values[1]);
    for (auto _ : state) {
        benchmark::DoNotOptimize(seqset_edit_distance(s, t));
    }
}
BENCHMARK(bench_seqset_edit)->Arg(5)->Arg(20)->Arg(60);

void bench_seqset_edit_packed(benchmark::State& state) {
    SynthConfig cfg;
    cfg.n_examples = 64;
    cfg.mean_length = static_cast<double>(state.range(0));
    cfg.mean_set_size = 20;
    cfg.mode = SynthMode::Order;
    const auto ds = generate(cfg);
    const ColumnEvaluator evaluator(ds.columns[0]);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluator.between_rows(i % 64, (i * 7 + 1) % 64));
        ++i;
    }
}
BENCHMARK(bench_seqset_edit_packed)->Arg(5)->Arg(20)->Arg(60);

void bench_ipsen(benchmark::State& state) {
    Rng rng(2);
    const auto g = make_random_graph(rng, static_cast<std::uint32_t>(state.range(0)));
    const auto h = make_random_graph(rng, static_cast<std::uint32_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ipsen_mikhailov(g, h));
    }
}
BENCHMARK(bench_ipsen)->Arg(8)->Arg(24)->Arg(48);

}  // namespace
