#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace impbench {

enum class ErrorCode {
    Parse,
    UnknownCategory,
    ConstantColumn,
    DuplicateColumn,
    SchemaMismatch,
    MissingCells,
    ZeroVariance,
    ColumnMismatch,
    InvalidPlan,
    InfeasiblePlan,
    Unsupported,
    RankDeficient,
    InsufficientData,
    NoDonor,
    Computational,
    Timeout,
    Config,
    Io,
    EmptyInput,
};

std::string_view to_string(ErrorCode code) noexcept;

// Errors raised while an imputer runs that the failure taxonomy files under
// "computational error".
constexpr bool is_computational(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::RankDeficient:
    case ErrorCode::InsufficientData:
    case ErrorCode::NoDonor:
    case ErrorCode::Computational:
        return true;
    default:
        return false;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message)
        , code_(code)
    {
    }

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace impbench
