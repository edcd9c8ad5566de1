#include "impbench/errors.hpp"

namespace impbench {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::UnknownCategory: return "UnknownCategory";
    case ErrorCode::ConstantColumn: return "ConstantColumn";
    case ErrorCode::DuplicateColumn: return "DuplicateColumn";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::MissingCells: return "MissingCells";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::ColumnMismatch: return "ColumnMismatch";
    case ErrorCode::InvalidPlan: return "InvalidPlan";
    case ErrorCode::InfeasiblePlan: return "InfeasiblePlan";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NoDonor: return "NoDonor";
    case ErrorCode::Computational: return "ComputationalError";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::EmptyInput: return "EmptyInput";
    }
    return "Unknown";
}

} // namespace impbench
