#pragma once

#include "impbench/dataset.hpp"
#include "impbench/imputers.hpp"
#include "impbench/metrics.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace impbench {

inline constexpr int kDefaultIScoreDraws = 20;

struct IScoreConfig {
    int draws = kDefaultIScoreDraws;
};

// Columns observed in every row where column j is observed (j excluded).
std::vector<std::size_t> projection_set(const Dataset& data, std::size_t j);

// Per-cell estimator term (1/2N^2) sum_{l,m} d(x_l, x_m) - (1/N) sum_l d(x_l, truth).
// Numeric cells use |a - b|.
double iscore_cell(std::span<const double> draws, double truth);
// Categorical cells: one-hot Euclidean distance, sqrt(2) between distinct labels.
double iscore_cell(std::span<const std::uint32_t> draws, std::uint32_t truth);

struct ColumnIScore {
    std::size_t column = 0;
    std::vector<std::size_t> projection;
    std::size_t evaluated_rows = 0;
    std::optional<double> value;
};

struct IScoreResult {
    Score score;
    std::vector<ColumnIScore> columns;
};

// Energy-I-Score of an imputation method on data with genuine missing values.
// The data are first completed once (or `initial` is used). For each column j
// with missing values, the rows observing j have it masked inside the
// projection onto j and its projection set, the method imputes that projection
// `draws` times, and the estimator is averaged over those rows. The overall
// score is the unweighted mean over columns and is undefined when no column
// has an evaluable row. Failed internal imputations raise Computational.
IScoreResult energy_iscore(const Dataset& incomplete, const Imputer& imputer, std::uint64_t seed,
                           const IScoreConfig& config = {}, const Dataset* initial = nullptr);

} // namespace impbench
