#pragma once

#include "impbench/metrics.hpp"
#include "impbench/records.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace impbench {

// Ranks of one scenario. Defined scores rank 1..s by orientation with ties
// sharing the mean of their positions; every empty entry (a failure) gets s + 1.
std::vector<double> rank_scores(std::span<const std::optional<double>> scores, Orientation orientation);

struct ScenarioId {
    std::string dataset;
    std::string data_type;
    std::string mechanism;
    double proportion = 0.0;
    int replicate = 0;

    auto operator<=>(const ScenarioId&) const = default;
};

struct MethodRank {
    std::string method;
    double rank = 0.0;
    bool failed = false;
};

struct ScenarioRanks {
    ScenarioId id;
    std::vector<MethodRank> ranks; // sorted by method name
    std::size_t successes = 0;
    // Every method failed, so every method shares rank 1.
    bool degenerate = false;
};

struct MethodSummary {
    std::string method;
    std::size_t scenarios = 0;
    std::size_t successes = 0;
    double mean_rank = 0.0;
    double median_rank = 0.0;
    [[nodiscard]] double success_rate() const noexcept
    {
        return scenarios ? static_cast<double>(successes) / static_cast<double>(scenarios) : 0.0;
    }
};

struct RankTable {
    Metric metric = Metric::EnergyDistance;
    std::vector<ScenarioRanks> scenarios;
    // Ordered by mean rank, then median rank, then name.
    std::vector<MethodSummary> methods;

    [[nodiscard]] const MethodSummary* find(std::string_view method) const;
};

// Groups records of `metric` by (dataset, mechanism, proportion, replicate)
// and ranks each group. Successful records whose value for `metric` is
// undefined leave the group unranked for that method. `data_type` restricts
// the table to "numeric" or "mixed" scenarios. Throws EmptyInput when no
// record qualifies and Config for a metric that is not ranked.
RankTable rank(std::span<const ScenarioRecord> records, Metric metric,
               std::optional<std::string> data_type = std::nullopt);

// Fraction of scenarios in which at least one method of `subset` has rank <= k.
double top_k_coverage(const RankTable& table, std::span<const std::string> subset, double k);

} // namespace impbench
