#pragma once

#include "impbench/ranking.hpp"
#include "impbench/records.hpp"

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace impbench {

struct ErrorFractions {
    std::string method; // "all" for the overall row
    std::size_t runs = 0;
    std::map<Status, std::size_t> counts;

    [[nodiscard]] double fraction(Status s) const;
    [[nodiscard]] double error_fraction() const;
};

// Per-method rows sorted by name, followed by the overall "all" row.
std::vector<ErrorFractions> error_fractions(std::span<const ScenarioRecord> records);

// Writes into out_dir:
//   ranks_long.csv      one row per (metric, scenario, method)
//   rank_summary.csv    mean/median rank per metric and scope (pooled, numeric, mixed)
//   error_fractions.csv verdict shares per method
//   runtime.csv         duration statistics per method
//   topk.csv            per-method top-k coverage for k = 1..#methods
//   summary.json        counts, degenerate scenarios and the pooled tables
// Output depends only on the records, so identical stores give identical files.
void write_report(std::span<const ScenarioRecord> records, const std::filesystem::path& out_dir);

// Plain-text mean/median rank table for terminals.
std::string format_rank_table(const RankTable& table);

} // namespace impbench
