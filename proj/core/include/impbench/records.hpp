#pragma once

#include "impbench/metrics.hpp"
#include "impbench/validation.hpp"

#include <optional>
#include <string>

namespace impbench {

// Identifies one imputation run. Real-missingness datasets use mechanism
// "real", their realized missing fraction as proportion and replicate 0.
struct ScenarioKey {
    std::string dataset;
    std::string method;
    std::string mechanism;
    double proportion = 0.0;
    int replicate = 0;

    [[nodiscard]] std::string str() const;
    bool operator==(const ScenarioKey&) const = default;
};

struct ScenarioRecord {
    ScenarioKey key;
    std::string data_type; // "numeric" or "mixed"
    Metric metric = Metric::EnergyDistance;
    std::optional<double> value; // set only for Success (and may stay empty if undefined)
    Orientation orientation = Orientation::LowerBetter;
    Status status = Status::Success;
    std::string detail;
    int attempts = 1;
    double duration_seconds = 0.0;
    std::optional<double> nrmse;
    std::optional<double> mpe;

    // Value of `m` for this record: the primary value or an auxiliary metric.
    [[nodiscard]] std::optional<double> value_of(Metric m) const;
};

// One JSON object per line. Durations are kept out of the record line so the
// result store is reproducible byte for byte; they travel in timing lines.
std::string record_to_json(const ScenarioRecord& record);
ScenarioRecord record_from_json(std::string_view line);
std::string timing_to_json(const ScenarioRecord& record);
// Returns the key and duration stored in a timing line.
std::pair<ScenarioKey, double> timing_from_json(std::string_view line);

} // namespace impbench
