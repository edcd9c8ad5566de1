#pragma once

#include "impbench/dataset.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace impbench {

// Column declarations plus the token that marks a missing cell.
struct SchemaConfig {
    Schema columns;
    std::string na_token = "NA";
};

SchemaConfig parse_schema_config(std::string_view json_text);
SchemaConfig load_schema_config(const std::filesystem::path& path);
std::string schema_config_to_json(const SchemaConfig& config);

struct CsvReadOptions {
    std::string na_token = "NA";
    // Unknown labels become Category{0} instead of raising UnknownCategory.
    bool lenient_categories = false;
    // Reject constant and duplicate columns (dataset ingestion, not imputer output).
    bool reject_degenerate = true;
    // Warn (once, to std::clog) when fewer rows than this are loaded.
    std::size_t min_rows_warning = 200;
    bool quiet = false;
};

Dataset read_csv(std::istream& in, const Schema& schema, const CsvReadOptions& options = {});
Dataset load_csv(const std::filesystem::path& path, const SchemaConfig& config);
Dataset load_csv(const std::filesystem::path& path, const SchemaConfig& config, CsvReadOptions options);

void write_csv(std::ostream& out, const Dataset& data, std::string_view na_token = "NA");
void save_csv(const std::filesystem::path& path, const Dataset& data, std::string_view na_token = "NA");

// 0/1 audit export of a mask, with the dataset's column names as header.
void write_mask_csv(std::ostream& out, const Mask& mask, const Schema& schema);

std::string format_double(double v);

} // namespace impbench
