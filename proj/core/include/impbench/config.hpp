#pragma once

#include "impbench/amputation.hpp"
#include "impbench/imputers.hpp"
#include "impbench/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace impbench {

// energy: complete data, artificially amputed, scored against the truth.
// iscore: data with genuine missing values, scored by the energy-I-Score.
enum class MetricMode { Energy, IScore };

std::string_view to_string(MetricMode mode) noexcept;

struct DatasetEntry {
    std::string id;
    std::filesystem::path path;
    std::filesystem::path schema;
    MetricMode mode = MetricMode::Energy;
};

inline constexpr std::uint64_t kDefaultSeed = 20240601;

struct BenchmarkConfig {
    std::vector<DatasetEntry> datasets;
    std::vector<ImputerSpec> methods;
    std::vector<Mechanism> mechanisms{Mechanism::MCAR, Mechanism::MAR};
    std::vector<double> proportions{0.1, 0.2, 0.3};
    int replicates = 2;
    std::uint64_t seed = kDefaultSeed;
    double timeout_seconds = kDefaultExternalTimeout;
    std::size_t jobs = 1;
    int iscore_draws = 20;
    std::filesystem::path store = "results.jsonl";
};

// JSON config. Relative paths resolve against `base_dir`. Methods are either
// a kind name ("cart") or an object
//   {"name": ..., "kind": ..., "hyperparams": {"k", "donors", "iterations",
//    "min_leaf"}, "command": ..., "supports_categorical": ...}.
// The string "builtin" expands to every built-in imputer.
BenchmarkConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
// Also honours IMPBENCH_SEED.
BenchmarkConfig load_config(const std::filesystem::path& path);

// Every built-in imputer with default hyperparameters.
std::vector<ImputerSpec> builtin_methods();

// Reads IMPBENCH_SEED; throws Config when set but not an unsigned integer.
std::optional<std::uint64_t> seed_from_environment();

} // namespace impbench
