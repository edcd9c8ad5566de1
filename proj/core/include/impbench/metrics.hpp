#pragma once

#include "impbench/dataset.hpp"

#include <cstddef>
#include <optional>
#include <string_view>

namespace impbench {

enum class Metric { EnergyDistance, NRMSE, MPE, EnergyIScore };
enum class Orientation { LowerBetter, HigherBetter };

std::string_view to_string(Metric metric) noexcept;
std::string_view to_string(Orientation orientation) noexcept;
Metric parse_metric(std::string_view s);
Orientation parse_orientation(std::string_view s);

Orientation orientation_of(Metric metric) noexcept;
// MPE is signed and reported only.
bool is_ranked(Metric metric) noexcept;

// An empty value means the metric is undefined for the input (for example MPE
// with a zero true value).
struct Score {
    Metric metric = Metric::EnergyDistance;
    std::optional<double> value;
    Orientation orientation = Orientation::LowerBetter;

    [[nodiscard]] bool defined() const noexcept { return value.has_value(); }
};

Score make_score(Metric metric, std::optional<double> value);

struct EnergyOptions {
    // Worker threads for the pairwise kernel; results do not depend on it.
    std::size_t threads = 1;
    std::size_t block_rows = 64;
};

// sum_i sum_j ||a_i - b_j||, accumulated per block of rows of `a` and reduced
// in block order.
double pairwise_distance_sum(const EncodedMatrix& a, const EncodedMatrix& b, const EnergyOptions& options = {});

// V-statistic estimate of the squared energy distance, diagonal terms included.
// Symmetric bit-for-bit and exactly zero for identical inputs.
double energy_distance_value(const EncodedMatrix& x, const EncodedMatrix& y, const EnergyOptions& options = {});
Score energy_distance(const EncodedMatrix& x, const EncodedMatrix& y, const EnergyOptions& options = {});

// Standardizes both datasets with the complete data's moments, one-hot encodes
// categorical columns and returns the energy distance.
Score standardized_energy(const Dataset& complete, const Dataset& imputed, const EnergyOptions& options = {});

// Root mean squared error over masked numeric cells, on the complete data's
// standardized scale. Undefined when no numeric cell is masked.
Score nrmse(const Dataset& complete, const Dataset& imputed, const Mask& mask);

// Mean percentage error (100/k) sum (true - imputed) / true over masked numeric
// cells on the raw scale. Undefined when a masked true value is zero.
Score mpe(const Dataset& complete, const Dataset& imputed, const Mask& mask);

} // namespace impbench
