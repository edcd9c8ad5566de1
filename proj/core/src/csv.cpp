#include "impbench/csv.hpp"

#include "impbench/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

namespace impbench {

namespace {

std::vector<std::string> split_line(const std::string& line, char delim)
{
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char c = line[k];
        if (quoted) {
            if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
                field += '"';
                ++k;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delim) {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    if (quoted) {
        throw Error(ErrorCode::Parse, "unterminated quote");
    }
    fields.push_back(std::move(field));
    return fields;
}

std::string quote_if_needed(std::string_view s)
{
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(s);
    }
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    out += '"';
    return out;
}

std::string trim(std::string s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& text, std::size_t row, const std::string& column)
{
    double v = 0.0;
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    if (!text.empty() && *begin == '+') {
        ++begin;
    }
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end) {
        throw Error(ErrorCode::Parse, "row " + std::to_string(row) + ", column '" + column + "': '" + text
                                          + "' is not a number");
    }
    return v;
}

void reject_degenerate_columns(const Dataset& data)
{
    for (std::size_t j = 0; j < data.cols(); ++j) {
        const auto col = data.column(j);
        const Cell* first = nullptr;
        bool constant = true;
        for (const auto& cell : col) {
            if (is_missing(cell)) {
                continue;
            }
            if (first == nullptr) {
                first = &cell;
            } else if (!(cell == *first)) {
                constant = false;
                break;
            }
        }
        if (constant) {
            throw Error(ErrorCode::ConstantColumn, "column '" + data.column_schema(j).name + "' is constant");
        }
        for (std::size_t k = 0; k < j; ++k) {
            if (data.column_schema(k).kind == data.column_schema(j).kind
                && std::equal(col.begin(), col.end(), data.column(k).begin())) {
                throw Error(ErrorCode::DuplicateColumn, "column '" + data.column_schema(j).name + "' duplicates '"
                                                            + data.column_schema(k).name + "'");
            }
        }
    }
}

} // namespace

std::string format_double(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) {
        throw Error(ErrorCode::Io, "cannot format number");
    }
    return std::string(buf, ptr);
}

SchemaConfig parse_schema_config(std::string_view json_text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Config, std::string("schema config: ") + e.what());
    }
    SchemaConfig config;
    try {
        config.na_token = doc.value("na_token", std::string("NA"));
        for (const auto& col : doc.at("columns")) {
            const auto name = col.at("name").get<std::string>();
            const auto kind = col.at("kind").get<std::string>();
            if (kind == "numeric") {
                config.columns.push_back(ColumnSchema::numeric(name));
            } else if (kind == "categorical") {
                config.columns.push_back(
                    ColumnSchema::categorical(name, col.at("categories").get<std::vector<std::string>>()));
            } else {
                throw Error(ErrorCode::Config, "column '" + name + "' has unknown kind '" + kind + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Config, std::string("schema config: ") + e.what());
    }
    check_schema(config.columns);
    return config;
}

SchemaConfig load_schema_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open schema config " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_schema_config(ss.str());
}

std::string schema_config_to_json(const SchemaConfig& config)
{
    nlohmann::json doc;
    doc["na_token"] = config.na_token;
    doc["columns"] = nlohmann::json::array();
    for (const auto& col : config.columns) {
        nlohmann::json c;
        c["name"] = col.name;
        c["kind"] = col.is_categorical() ? "categorical" : "numeric";
        if (col.is_categorical()) {
            c["categories"] = col.categories;
        }
        doc["columns"].push_back(std::move(c));
    }
    return doc.dump(2);
}

Dataset read_csv(std::istream& in, const Schema& schema, const CsvReadOptions& options)
{
    check_schema(schema);
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::Parse, "missing header row");
    }
    auto header = split_line(line, ',');
    for (auto& h : header) {
        h = trim(std::move(h));
    }
    if (header.size() != schema.size()) {
        throw Error(ErrorCode::SchemaMismatch, "header has " + std::to_string(header.size()) + " columns, schema declares "
                                                   + std::to_string(schema.size()));
    }
    for (std::size_t j = 0; j < schema.size(); ++j) {
        if (header[j] != schema[j].name) {
            throw Error(ErrorCode::SchemaMismatch, "header column " + std::to_string(j) + " is '" + header[j]
                                                       + "', schema expects '" + schema[j].name + "'");
        }
    }

    std::vector<Dataset::Column> cols(schema.size());
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trim(line).empty()) {
            continue;
        }
        ++row;
        const auto fields = split_line(line, ',');
        if (fields.size() != schema.size()) {
            throw Error(ErrorCode::Parse, "row " + std::to_string(row) + " has " + std::to_string(fields.size())
                                              + " fields, expected " + std::to_string(schema.size()));
        }
        for (std::size_t j = 0; j < schema.size(); ++j) {
            auto field = trim(fields[j]);
            if (field == options.na_token) {
                cols[j].emplace_back(Missing{});
            } else if (schema[j].is_categorical()) {
                const auto code = schema[j].code_of(field);
                if (!code && !options.lenient_categories) {
                    throw Error(ErrorCode::UnknownCategory, "row " + std::to_string(row) + ", column '" + schema[j].name
                                                                + "': '" + field + "' is not a declared category");
                }
                cols[j].emplace_back(Category{code.value_or(0)});
            } else {
                cols[j].emplace_back(parse_double(field, row, schema[j].name));
            }
        }
    }
    if (row == 0) {
        throw Error(ErrorCode::EmptyInput, "CSV has no data rows");
    }
    Dataset data = options.lenient_categories ? Dataset(unchecked, schema, std::move(cols))
                                              : Dataset(schema, std::move(cols));
    if (options.reject_degenerate) {
        reject_degenerate_columns(data);
    }
    if (!options.quiet && data.rows() < options.min_rows_warning) {
        std::clog << "impbench: warning: dataset has only " << data.rows() << " rows (fewer than "
                  << options.min_rows_warning << ")\n";
    }
    return data;
}

Dataset load_csv(const std::filesystem::path& path, const SchemaConfig& config)
{
    CsvReadOptions options;
    options.na_token = config.na_token;
    return load_csv(path, config, options);
}

Dataset load_csv(const std::filesystem::path& path, const SchemaConfig& config, CsvReadOptions options)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open " + path.string());
    }
    options.na_token = config.na_token;
    return read_csv(in, config.columns, options);
}

void write_csv(std::ostream& out, const Dataset& data, std::string_view na_token)
{
    const auto& schema = data.schema();
    for (std::size_t j = 0; j < schema.size(); ++j) {
        out << (j ? "," : "") << quote_if_needed(schema[j].name);
    }
    out << '\n';
    for (std::size_t i = 0; i < data.rows(); ++i) {
        for (std::size_t j = 0; j < data.cols(); ++j) {
            if (j) {
                out << ',';
            }
            const auto& cell = data.at(i, j);
            if (is_missing(cell)) {
                out << na_token;
            } else if (const auto* c = std::get_if<Category>(&cell)) {
                if (c->code == 0 || c->code > schema[j].levels()) {
                    throw Error(ErrorCode::UnknownCategory, "cannot write out-of-range category code");
                }
                out << quote_if_needed(schema[j].categories[c->code - 1]);
            } else {
                out << format_double(std::get<double>(cell));
            }
        }
        out << '\n';
    }
}

void save_csv(const std::filesystem::path& path, const Dataset& data, std::string_view na_token)
{
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
    write_csv(out, data, na_token);
    if (!out) {
        throw Error(ErrorCode::Io, "write failed for " + path.string());
    }
}

void write_mask_csv(std::ostream& out, const Mask& mask, const Schema& schema)
{
    if (schema.size() != mask.cols()) {
        throw Error(ErrorCode::ColumnMismatch, "mask width differs from schema");
    }
    for (std::size_t j = 0; j < schema.size(); ++j) {
        out << (j ? "," : "") << quote_if_needed(schema[j].name);
    }
    out << '\n';
    for (std::size_t i = 0; i < mask.rows(); ++i) {
        for (std::size_t j = 0; j < mask.cols(); ++j) {
            out << (j ? "," : "") << (mask(i, j) ? '1' : '0');
        }
        out << '\n';
    }
}

} // namespace impbench
