#include "impbench/amputation.hpp"
#include "impbench/imputers.hpp"
#include "impbench/random.hpp"

#include <benchmark/benchmark.h>

namespace {

impbench::Dataset incomplete_gaussian(std::size_t n)
{
    auto rng = impbench::make_rng(7);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<std::vector<double>> cols(4, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double z = normal(rng);
        for (std::size_t j = 0; j < 4; ++j) {
            cols[j][i] = z + 0.5 * normal(rng);
        }
    }
    const auto complete = impbench::Dataset::from_numeric({"a", "b", "c", "d"}, cols);
    const auto plan = impbench::AmputationPlan::make_default(4, impbench::Mechanism::MCAR, 0.2, 3);
    return complete.with_mask(impbench::amputate(complete, plan).mask);
}

void run_kind(benchmark::State& state, impbench::ImputerKind kind)
{
    const auto data = incomplete_gaussian(static_cast<std::size_t>(state.range(0)));
    const auto imputer = impbench::make_imputer(impbench::ImputerSpec::of(kind));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(imputer->run(data, ++seed));
    }
}

void BM_Knn(benchmark::State& state) { run_kind(state, impbench::ImputerKind::KNN); }
void BM_Pmm(benchmark::State& state) { run_kind(state, impbench::ImputerKind::PMM); }
void BM_CartFcs(benchmark::State& state) { run_kind(state, impbench::ImputerKind::CartFCS); }

} // namespace

BENCHMARK(BM_Knn)->Arg(500)->Arg(2000);
BENCHMARK(BM_Pmm)->Arg(500)->Arg(2000);
BENCHMARK(BM_CartFcs)->Arg(500)->Arg(2000);
