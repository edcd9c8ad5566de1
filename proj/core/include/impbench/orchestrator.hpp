#pragma once

#include "impbench/config.hpp"
#include "impbench/records.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace impbench {

struct LoadedDataset {
    DatasetEntry entry;
    Dataset data;
    std::string data_type; // "numeric" or "mixed"
};

// Loads every dataset and runs the pre-flight checks: energy datasets must be
// complete (the truth is needed) and iscore datasets must have missing cells.
std::vector<LoadedDataset> load_datasets(const BenchmarkConfig& config);

// Seed of the amputation for one (dataset, mechanism, proportion) cell; the
// replicate id is mixed in by amputate(). Independent of the method, so every
// method sees the same masks.
std::uint64_t amputation_seed(std::uint64_t global_seed, const std::string& dataset, Mechanism mechanism,
                              double proportion);
std::uint64_t imputer_seed(std::uint64_t scenario_seed, const std::string& method);

struct RunOptions {
    bool resume = false;
    // Overrides config.jobs when non-zero.
    std::size_t jobs = 0;
    // Called from the writer thread after each record is stored.
    std::function<void(const ScenarioRecord&, std::size_t done, std::size_t total)> progress;
};

struct RunSummary {
    std::size_t scenarios = 0;
    std::size_t executed = 0;
    std::size_t skipped = 0;
    std::size_t failures = 0;
};

// Runs the whole grid: one record per (dataset, mechanism, proportion,
// replicate, method) for energy datasets and per (dataset, method) for iscore
// datasets. Methods that cannot handle categorical columns are not run on
// mixed datasets. Records reach the store in grid order whatever `jobs` is.
RunSummary run_benchmark(const BenchmarkConfig& config, const RunOptions& options = {});

} // namespace impbench
