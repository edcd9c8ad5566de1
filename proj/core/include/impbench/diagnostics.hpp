#pragma once

#include "impbench/dataset.hpp"
#include "impbench/imputers.hpp"
#include "impbench/validation.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace impbench {

// Encodings a plugin may be handed a categorical variable in.
enum class CategoricalFormat {
    Integer, // labels "1", "2", "3"
    Label,   // labels "red", "green", "blue"
    OneHot,  // one numeric 0/1 column per level
};

std::string_view to_string(CategoricalFormat format) noexcept;

struct DiagnosticCase {
    CategoricalFormat format = CategoricalFormat::Integer;
    Dataset complete;
    Dataset incomplete;
    std::vector<OneHotGroup> one_hot;
};

// Small mixed dataset (two numeric columns, one three-level categorical) in
// each format, with missing cells in the categorical variable and one numeric
// column. Each level stays observed in every case.
std::vector<DiagnosticCase> categorical_diagnostic_cases(std::uint64_t seed = 1);

struct DiagnosticResult {
    CategoricalFormat format = CategoricalFormat::Integer;
    Verdict verdict;
};

struct DiagnosticReport {
    std::vector<DiagnosticResult> results;

    // A method handles categorical data if it passes in at least one format.
    [[nodiscard]] bool capable() const noexcept;
};

DiagnosticReport run_categorical_diagnostics(const Imputer& imputer, std::uint64_t seed = 1,
                                             const RetryOptions& options = {});

} // namespace impbench
