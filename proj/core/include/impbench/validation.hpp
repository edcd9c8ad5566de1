#pragma once

#include "impbench/dataset.hpp"
#include "impbench/errors.hpp"
#include "impbench/imputers.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>

namespace impbench {

enum class Status { Success, ModifiedObserved, MissingRemained, ComputationalError, Timeout, InvalidCategory };

std::string_view to_string(Status status) noexcept;
Status parse_status(std::string_view s);

// Observed numeric cells may drift by strictly less than this.
inline constexpr double kObservedTolerance = 1.5e-5;

struct Verdict {
    Status status = Status::Success;
    std::string detail;
    int attempts = 1;

    [[nodiscard]] bool success() const noexcept { return status == Status::Success; }
};

// A process-level failure: the imputer threw or ran out of time.
struct Failure {
    Status status = Status::ComputationalError; // ComputationalError or Timeout
    std::string message;
};

using Outcome = std::variant<Dataset, Failure>;

// Numeric columns that together one-hot encode a single categorical variable.
struct OneHotGroup {
    std::string name;
    std::vector<std::size_t> columns;
};

// Classifies an outcome against the pre-imputation data. Checks run in a fixed
// order (process failure, remaining missing cells, modified observed cells,
// invalid categories) and the first hit wins. Non-finite numbers count as
// missing. Never throws.
Verdict validate(const Dataset& original, const Outcome& outcome, std::span<const OneHotGroup> one_hot = {});

// Maps an exception escaping an imputer onto the taxonomy.
Failure failure_from(const std::exception& e);

struct RetryOptions {
    // Second attempts use seed + seed_offset.
    std::uint64_t seed_offset = 1'000'003;
    // Wall-clock limit in seconds (0 = none). Imputers that do not enforce it
    // themselves are classified as Timeout after the fact.
    double timeout_seconds = 0.0;
};

struct RunResult {
    Outcome outcome;
    Verdict verdict;
    double duration_seconds = 0.0;
};

// One attempt: runs the imputer, times it and captures failures.
RunResult attempt(const Imputer& imputer, const Dataset& incomplete, std::uint64_t seed, double timeout_seconds = 0.0,
                  std::span<const OneHotGroup> one_hot = {});

// Reruns once when the first attempt ends in ComputationalError; the verdict
// is that of the last attempt. Timeouts and validation failures are final.
// duration_seconds covers the reported attempt only.
RunResult run_with_retry(const Imputer& imputer, const Dataset& incomplete, std::uint64_t seed,
                         const RetryOptions& options = {}, std::span<const OneHotGroup> one_hot = {});

} // namespace impbench
