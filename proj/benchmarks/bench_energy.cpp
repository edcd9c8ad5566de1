#include "impbench/metrics.hpp"
#include "impbench/random.hpp"

#include <benchmark/benchmark.h>

namespace {

impbench::EncodedMatrix random_matrix(std::size_t n, std::size_t d, std::uint64_t seed)
{
    auto rng = impbench::make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> v(n * d);
    for (auto& x : v) {
        x = normal(rng);
    }
    return impbench::EncodedMatrix(n, d, std::move(v));
}

void BM_EnergyDistance(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto threads = static_cast<std::size_t>(state.range(1));
    const auto x = random_matrix(n, 8, 1);
    const auto y = random_matrix(n, 8, 2);
    impbench::EnergyOptions opts;
    opts.threads = threads;
    for (auto _ : state) {
        benchmark::DoNotOptimize(impbench::energy_distance_value(x, y, opts));
    }
    state.SetComplexityN(state.range(0));
}

} // namespace

BENCHMARK(BM_EnergyDistance)->Args({250, 1})->Args({500, 1})->Args({1000, 1})->Args({2000, 1})->Args({2000, 4});
BENCHMARK_MAIN();
