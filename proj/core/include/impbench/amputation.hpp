#pragma once

#include "impbench/dataset.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace impbench {

enum class Mechanism { MCAR, MAR };

std::string_view to_string(Mechanism m) noexcept;
Mechanism parse_mechanism(std::string_view s);

// Only the right-tailed logistic is implemented; the enum is the extension point.
enum class LogisticShift { Right };

struct AmputationPlan {
    Mechanism mechanism = Mechanism::MCAR;
    double proportion = 0.1;
    // patterns[k][j] == true: pattern k amputates column j.
    std::vector<std::vector<bool>> patterns;
    std::vector<double> pattern_freq;
    // Per-pattern MAR scoring weights; entries on amputated columns are ignored.
    std::vector<std::vector<double>> weights;
    std::uint64_t seed = 0;
    LogisticShift shift = LogisticShift::Right;

    // Cyclic blocks of m consecutive columns, one pattern per starting column,
    // uniform frequency, unit weights on every observed column. m is the
    // smallest block width that keeps the per-pattern row fraction <= 0.5.
    static AmputationPlan make_default(std::size_t cols, Mechanism mechanism, double proportion, std::uint64_t seed);

    void validate(std::size_t cols) const;
};

inline constexpr double kMaxDefaultRowFraction = 0.5;

struct MaskReplicate {
    int replicate_id = 0;
    Mask mask;
};

MaskReplicate amputate(const Dataset& complete, const AmputationPlan& plan, int replicate_id = 0);

// Serialized as a JSON object; the config format used by the orchestrator.
std::string plan_to_json(const AmputationPlan& plan);
AmputationPlan plan_from_json(std::string_view json_text);

struct PatternDependence {
    std::size_t pattern = 0;
    std::size_t rows = 0;
    std::size_t masked_rows = 0;
    double spearman = 0.0;
    // One-sided (positive correlation) normal-approximation p-value.
    double p_value = 1.0;
    double bottom_quartile_rate = 0.0;
    double top_quartile_rate = 0.0;
};

struct DependenceReport {
    std::vector<PatternDependence> patterns;
    // Stouffer combination of the per-pattern z statistics (informative patterns only).
    double combined_p_value = 1.0;

    [[nodiscard]] bool rejects_independence(double alpha = 0.01) const noexcept { return combined_p_value < alpha; }
};

// Rank correlation between each pattern's weighted observed-column score and
// the indicator that the row carries that pattern's missingness.
DependenceReport mar_dependence_check(const Dataset& complete, const MaskReplicate& replicate, const AmputationPlan& plan);

double spearman_correlation(std::span<const double> x, std::span<const double> y);

} // namespace impbench
