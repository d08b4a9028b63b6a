#include <benchmark/benchmark.h>

#include <random>

#include "fairaudit/kmeans.hpp"
#include "fairaudit/similar.hpp"
#include "fairaudit/subgroups.hpp"
#include "support/fixtures.hpp"

using namespace fairaudit;

namespace {

LoadResult table(std::size_t rows) {
    std::mt19937_64 rng(1);
    return fixtures::random_table(rng, rows, {2, 5, 6, 3, 10, 10, 4, 8, 2, 7, 10, 3});
}

void BM_KMeans(benchmark::State& state) {
    auto t = table(static_cast<std::size_t>(state.range(0)));
    auto m = one_hot(t.table, t.schema);
    ClusterConfig config;
    config.k = 15;
    for (auto _ : state) benchmark::DoNotOptimize(kmeans(m, config));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KMeans)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_Materialize(benchmark::State& state) {
    auto t = table(static_cast<std::size_t>(state.range(0)));
    auto registry = MetricRegistry::with_defaults();
    auto spec = make_predicate_spec(t.schema, {{1, 2}, {4, 3}});
    for (auto _ : state) benchmark::DoNotOptimize(materialize(spec, t.table, t.schema, registry));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Materialize)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_SubgroupDistance(benchmark::State& state) {
    auto t = table(50000);
    auto registry = MetricRegistry::with_defaults();
    auto a = materialize(make_predicate_spec(t.schema, {{1, 2}}), t.table, t.schema, registry);
    auto b = materialize(make_predicate_spec(t.schema, {{4, 3}}), t.table, t.schema, registry);
    for (auto _ : state) benchmark::DoNotOptimize(subgroup_distance(a, b, t.schema));
}
BENCHMARK(BM_SubgroupDistance);

void BM_JsDivergence(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<double> p(n, 1.0 / double(n));
    std::vector<double> q(n, 0.0);
    q[0] = 1.0;
    for (auto _ : state) benchmark::DoNotOptimize(js_divergence(p, q));
}
BENCHMARK(BM_JsDivergence)->Arg(2)->Arg(16)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
