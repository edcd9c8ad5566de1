#include "impbench/errors.hpp"
#include "impbench/metrics.hpp"

#include <cmath>

namespace impbench {

std::string_view to_string(Metric metric) noexcept
{
    switch (metric) {
    case Metric::EnergyDistance:
        return "energy";
    case Metric::NRMSE:
        return "nrmse";
    case Metric::MPE:
        return "mpe";
    case Metric::EnergyIScore:
        return "iscore";
    }
    return "unknown";
}

std::string_view to_string(Orientation orientation) noexcept
{
    return orientation == Orientation::LowerBetter ? "lower_better" : "higher_better";
}

Metric parse_metric(std::string_view s)
{
    for (auto m : {Metric::EnergyDistance, Metric::NRMSE, Metric::MPE, Metric::EnergyIScore}) {
        if (to_string(m) == s) {
            return m;
        }
    }
    if (s == "energy_distance") {
        return Metric::EnergyDistance;
    }
    if (s == "energy_iscore") {
        return Metric::EnergyIScore;
    }
    throw Error(ErrorCode::Config, "unknown metric '" + std::string(s) + "'");
}

Orientation parse_orientation(std::string_view s)
{
    if (s == "lower_better") {
        return Orientation::LowerBetter;
    }
    if (s == "higher_better") {
        return Orientation::HigherBetter;
    }
    throw Error(ErrorCode::Parse, "unknown orientation '" + std::string(s) + "'");
}

Orientation orientation_of(Metric metric) noexcept
{
    return metric == Metric::EnergyIScore ? Orientation::HigherBetter : Orientation::LowerBetter;
}

bool is_ranked(Metric metric) noexcept
{
    return metric != Metric::MPE;
}

Score make_score(Metric metric, std::optional<double> value)
{
    return Score{metric, value, orientation_of(metric)};
}

namespace {

void require_same_shape(const Dataset& complete, const Dataset& imputed)
{
    if (complete.schema() != imputed.schema() || complete.rows() != imputed.rows()) {
        throw Error(ErrorCode::ColumnMismatch, "complete and imputed datasets differ in shape or schema");
    }
}

void require_mask_shape(const Dataset& complete, const Mask& mask)
{
    if (mask.rows() != complete.rows() || mask.cols() != complete.cols()) {
        throw Error(ErrorCode::ColumnMismatch, "mask shape differs from the dataset");
    }
}

} // namespace

Score standardized_energy(const Dataset& complete, const Dataset& imputed, const EnergyOptions& options)
{
    require_same_shape(complete, imputed);
    const auto stats = compute_stats(complete);
    const auto x = one_hot_encode(standardize(complete, stats));
    const auto y = one_hot_encode(standardize(imputed, stats));
    return energy_distance(x, y, options);
}

Score nrmse(const Dataset& complete, const Dataset& imputed, const Mask& mask)
{
    require_same_shape(complete, imputed);
    require_mask_shape(complete, mask);
    const auto stats = compute_stats(complete);
    double ss = 0.0;
    std::size_t k = 0;
    for (std::size_t j = 0; j < complete.cols(); ++j) {
        if (complete.column_schema(j).is_categorical()) {
            continue;
        }
        const double sd = stats.columns[j]->sd;
        for (std::size_t i = 0; i < complete.rows(); ++i) {
            if (!mask(i, j)) {
                continue;
            }
            const double diff = (complete.number(i, j) - imputed.number(i, j)) / sd;
            ss += diff * diff;
            ++k;
        }
    }
    if (k == 0) {
        return make_score(Metric::NRMSE, std::nullopt);
    }
    return make_score(Metric::NRMSE, std::sqrt(ss / static_cast<double>(k)));
}

Score mpe(const Dataset& complete, const Dataset& imputed, const Mask& mask)
{
    require_same_shape(complete, imputed);
    require_mask_shape(complete, mask);
    double sum = 0.0;
    std::size_t k = 0;
    for (std::size_t j = 0; j < complete.cols(); ++j) {
        if (complete.column_schema(j).is_categorical()) {
            continue;
        }
        for (std::size_t i = 0; i < complete.rows(); ++i) {
            if (!mask(i, j)) {
                continue;
            }
            const double truth = complete.number(i, j);
            if (truth == 0.0) {
                return make_score(Metric::MPE, std::nullopt);
            }
            sum += (truth - imputed.number(i, j)) / truth;
            ++k;
        }
    }
    if (k == 0) {
        return make_score(Metric::MPE, std::nullopt);
    }
    return make_score(Metric::MPE, 100.0 * sum / static_cast<double>(k));
}

} // namespace impbench
