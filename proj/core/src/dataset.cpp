#include "impbench/dataset.hpp"

#include "impbench/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace impbench {

ColumnSchema ColumnSchema::numeric(std::string name)
{
    return ColumnSchema{std::move(name), ColumnKind::Numeric, {}};
}

ColumnSchema ColumnSchema::categorical(std::string name, std::vector<std::string> categories)
{
    return ColumnSchema{std::move(name), ColumnKind::Categorical, std::move(categories)};
}

std::optional<std::uint32_t> ColumnSchema::code_of(std::string_view label) const
{
    for (std::size_t k = 0; k < categories.size(); ++k) {
        if (categories[k] == label) {
            return static_cast<std::uint32_t>(k + 1);
        }
    }
    return std::nullopt;
}

void check_schema(const Schema& schema)
{
    if (schema.empty()) {
        throw Error(ErrorCode::SchemaMismatch, "schema has no columns");
    }
    std::set<std::string> names;
    for (const auto& col : schema) {
        if (!names.insert(col.name).second) {
            throw Error(ErrorCode::SchemaMismatch, "duplicate column name '" + col.name + "'");
        }
        if (!col.is_categorical()) {
            if (!col.categories.empty()) {
                throw Error(ErrorCode::SchemaMismatch, "numeric column '" + col.name + "' lists categories");
            }
            continue;
        }
        if (col.categories.size() < 2) {
            throw Error(ErrorCode::SchemaMismatch, "categorical column '" + col.name + "' needs at least 2 categories");
        }
        std::set<std::string> labels(col.categories.begin(), col.categories.end());
        if (labels.size() != col.categories.size()) {
            throw Error(ErrorCode::SchemaMismatch, "categorical column '" + col.name + "' repeats a label");
        }
    }
}

Mask::Mask(std::size_t rows, std::size_t cols, bool value)
    : rows_(rows)
    , cols_(cols)
    , bits_(rows * cols, value ? 1 : 0)
{
}

std::size_t Mask::count() const noexcept
{
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::size_t Mask::count_column(std::size_t j) const noexcept
{
    std::size_t c = 0;
    for (std::size_t i = 0; i < rows_; ++i) {
        c += bits_[i * cols_ + j];
    }
    return c;
}

double Mask::fraction() const noexcept
{
    const auto total = rows_ * cols_;
    return total == 0 ? 0.0 : static_cast<double>(count()) / static_cast<double>(total);
}

Dataset::Dataset(Schema schema, std::vector<Column> columns)
    : schema_(std::move(schema))
    , columns_(std::move(columns))
{
    check_shape();
    check_categories();
}

Dataset::Dataset(Unchecked, Schema schema, std::vector<Column> columns)
    : schema_(std::move(schema))
    , columns_(std::move(columns))
{
    check_shape();
}

Dataset Dataset::from_numeric(std::vector<std::string> names, const std::vector<std::vector<double>>& columns)
{
    if (names.size() != columns.size()) {
        throw Error(ErrorCode::SchemaMismatch, "name count differs from column count");
    }
    Schema schema;
    std::vector<Column> cells;
    for (std::size_t j = 0; j < names.size(); ++j) {
        schema.push_back(ColumnSchema::numeric(std::move(names[j])));
        Column col;
        col.reserve(columns[j].size());
        for (double v : columns[j]) {
            col.emplace_back(v);
        }
        cells.push_back(std::move(col));
    }
    return Dataset(std::move(schema), std::move(cells));
}

void Dataset::check_shape() const
{
    check_schema(schema_);
    if (columns_.size() != schema_.size()) {
        throw Error(ErrorCode::SchemaMismatch, "schema lists " + std::to_string(schema_.size()) + " columns but data has "
                                                   + std::to_string(columns_.size()));
    }
    const auto n = columns_.front().size();
    if (n == 0) {
        throw Error(ErrorCode::EmptyInput, "dataset has no rows");
    }
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        if (columns_[j].size() != n) {
            throw Error(ErrorCode::SchemaMismatch, "ragged column '" + schema_[j].name + "'");
        }
        const bool categorical = schema_[j].is_categorical();
        for (const auto& cell : columns_[j]) {
            if (impbench::is_missing(cell)) {
                continue;
            }
            if (categorical != std::holds_alternative<Category>(cell)) {
                throw Error(ErrorCode::SchemaMismatch, "cell type does not match kind of column '" + schema_[j].name + "'");
            }
        }
    }
}

void Dataset::check_categories() const
{
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        if (!schema_[j].is_categorical()) {
            continue;
        }
        const auto levels = schema_[j].levels();
        for (const auto& cell : columns_[j]) {
            if (const auto* c = std::get_if<Category>(&cell); c && (c->code == 0 || c->code > levels)) {
                throw Error(ErrorCode::UnknownCategory,
                            "code " + std::to_string(c->code) + " outside column '" + schema_[j].name + "'");
            }
        }
    }
}

double Dataset::number(std::size_t i, std::size_t j) const
{
    if (const auto* v = std::get_if<double>(&columns_[j][i])) {
        return *v;
    }
    throw Error(ErrorCode::SchemaMismatch, "cell (" + std::to_string(i) + ", " + std::to_string(j) + ") is not a number");
}

std::uint32_t Dataset::code(std::size_t i, std::size_t j) const
{
    if (const auto* c = std::get_if<Category>(&columns_[j][i])) {
        return c->code;
    }
    throw Error(ErrorCode::SchemaMismatch, "cell (" + std::to_string(i) + ", " + std::to_string(j) + ") is not a category");
}

Mask Dataset::mask() const
{
    Mask m(rows(), cols());
    for (std::size_t j = 0; j < cols(); ++j) {
        for (std::size_t i = 0; i < rows(); ++i) {
            if (impbench::is_missing(columns_[j][i])) {
                m.set(i, j, true);
            }
        }
    }
    return m;
}

std::size_t Dataset::missing_count() const noexcept
{
    std::size_t c = 0;
    for (const auto& col : columns_) {
        c += static_cast<std::size_t>(
            std::count_if(col.begin(), col.end(), [](const Cell& x) { return impbench::is_missing(x); }));
    }
    return c;
}

bool Dataset::has_categorical() const noexcept
{
    return std::any_of(schema_.begin(), schema_.end(), [](const ColumnSchema& c) { return c.is_categorical(); });
}

std::size_t Dataset::index_of(std::string_view name) const
{
    for (std::size_t j = 0; j < schema_.size(); ++j) {
        if (schema_[j].name == name) {
            return j;
        }
    }
    throw Error(ErrorCode::ColumnMismatch, "no column named '" + std::string(name) + "'");
}

std::vector<double> Dataset::observed_numbers(std::size_t j) const
{
    std::vector<double> out;
    out.reserve(rows());
    for (const auto& cell : columns_.at(j)) {
        if (const auto* v = std::get_if<double>(&cell)) {
            out.push_back(*v);
        }
    }
    return out;
}

Dataset Dataset::with_mask(const Mask& mask) const
{
    if (mask.rows() != rows() || mask.cols() != cols()) {
        throw Error(ErrorCode::ColumnMismatch, "mask shape differs from dataset shape");
    }
    auto cols_copy = columns_;
    for (std::size_t j = 0; j < cols(); ++j) {
        for (std::size_t i = 0; i < rows(); ++i) {
            if (mask(i, j)) {
                cols_copy[j][i] = Missing{};
            }
        }
    }
    return Dataset(unchecked, schema_, std::move(cols_copy));
}

Dataset Dataset::select_columns(std::span<const std::size_t> cols) const
{
    Schema schema;
    std::vector<Column> data;
    for (auto j : cols) {
        schema.push_back(schema_.at(j));
        data.push_back(columns_.at(j));
    }
    return Dataset(unchecked, std::move(schema), std::move(data));
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const
{
    std::vector<Column> data(cols());
    for (std::size_t j = 0; j < cols(); ++j) {
        data[j].reserve(rows.size());
        for (auto i : rows) {
            data[j].push_back(columns_[j].at(i));
        }
    }
    return Dataset(unchecked, schema_, std::move(data));
}

StandardizationStats compute_stats(const Dataset& complete)
{
    if (complete.has_missing()) {
        throw Error(ErrorCode::MissingCells, "standardization statistics need complete data");
    }
    const auto n = complete.rows();
    StandardizationStats stats;
    stats.columns.resize(complete.cols());
    for (std::size_t j = 0; j < complete.cols(); ++j) {
        if (complete.column_schema(j).is_categorical()) {
            continue;
        }
        const auto values = complete.observed_numbers(j);
        const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
        double ss = 0.0;
        for (double v : values) {
            ss += (v - mean) * (v - mean);
        }
        const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
        if (!(sd > 0.0)) {
            throw Error(ErrorCode::ZeroVariance, "column '" + complete.column_schema(j).name + "' has zero variance");
        }
        stats.columns[j] = ColumnStats{mean, sd};
    }
    return stats;
}

namespace {

template <typename F>
Dataset transform_numeric(const Dataset& data, const StandardizationStats& stats, F f)
{
    if (stats.columns.size() != data.cols()) {
        throw Error(ErrorCode::ColumnMismatch, "statistics cover " + std::to_string(stats.columns.size())
                                                   + " columns, dataset has " + std::to_string(data.cols()));
    }
    auto cols = data.columns();
    for (std::size_t j = 0; j < data.cols(); ++j) {
        const bool categorical = data.column_schema(j).is_categorical();
        if (categorical != !stats.columns[j].has_value()) {
            throw Error(ErrorCode::ColumnMismatch, "statistics do not match kind of column '"
                                                       + data.column_schema(j).name + "'");
        }
        if (categorical) {
            continue;
        }
        const auto& s = *stats.columns[j];
        for (auto& cell : cols[j]) {
            if (auto* v = std::get_if<double>(&cell)) {
                *v = f(*v, s);
            }
        }
    }
    return Dataset(unchecked, data.schema(), std::move(cols));
}

} // namespace

Dataset standardize(const Dataset& data, const StandardizationStats& stats)
{
    return transform_numeric(data, stats, [](double v, const ColumnStats& s) { return (v - s.mean) / s.sd; });
}

Dataset unstandardize(const Dataset& data, const StandardizationStats& stats)
{
    return transform_numeric(data, stats, [](double v, const ColumnStats& s) { return v * s.sd + s.mean; });
}

EncodedMatrix::EncodedMatrix(std::size_t rows, std::size_t dims, std::vector<double> values, std::vector<ColumnSpan> spans)
    : rows_(rows)
    , dims_(dims)
    , values_(std::move(values))
    , spans_(std::move(spans))
{
    if (values_.size() != rows_ * dims_) {
        throw Error(ErrorCode::ColumnMismatch, "encoded matrix value count differs from rows * dims");
    }
    if (spans_.empty()) {
        for (std::size_t k = 0; k < dims_; ++k) {
            spans_.push_back({k, 1});
        }
    }
}

EncodedMatrix one_hot_encode(const Dataset& data)
{
    if (data.has_missing()) {
        throw Error(ErrorCode::MissingCells, "one-hot encoding needs a dataset without missing cells");
    }
    std::vector<ColumnSpan> spans;
    std::size_t dims = 0;
    for (const auto& col : data.schema()) {
        const auto width = col.is_categorical() ? col.levels() : 1;
        spans.push_back({dims, width});
        dims += width;
    }
    const auto n = data.rows();
    std::vector<double> values(n * dims, 0.0);
    for (std::size_t j = 0; j < data.cols(); ++j) {
        const auto span = spans[j];
        const bool categorical = data.column_schema(j).is_categorical();
        for (std::size_t i = 0; i < n; ++i) {
            if (categorical) {
                const auto code = data.code(i, j);
                if (code == 0 || code > span.width) {
                    throw Error(ErrorCode::UnknownCategory, "cannot one-hot encode out-of-range code");
                }
                values[i * dims + span.first + code - 1] = 1.0;
            } else {
                values[i * dims + span.first] = data.number(i, j);
            }
        }
    }
    return EncodedMatrix(n, dims, std::move(values), std::move(spans));
}

Dataset decode(const EncodedMatrix& encoded, const Schema& schema)
{
    check_schema(schema);
    const auto& spans = encoded.spans();
    if (spans.size() != schema.size()) {
        throw Error(ErrorCode::ColumnMismatch, "encoded column map does not match schema");
    }
    std::vector<Dataset::Column> cols(schema.size());
    for (std::size_t j = 0; j < schema.size(); ++j) {
        const auto span = spans[j];
        const auto expected = schema[j].is_categorical() ? schema[j].levels() : 1;
        if (span.width != expected) {
            throw Error(ErrorCode::ColumnMismatch, "span width mismatch for column '" + schema[j].name + "'");
        }
        cols[j].reserve(encoded.rows());
        for (std::size_t i = 0; i < encoded.rows(); ++i) {
            if (!schema[j].is_categorical()) {
                cols[j].emplace_back(encoded(i, span.first));
                continue;
            }
            std::uint32_t code = 0;
            for (std::size_t k = 0; k < span.width; ++k) {
                if (encoded(i, span.first + k) == 1.0) {
                    code = code == 0 ? static_cast<std::uint32_t>(k + 1) : 0;
                    if (code == 0) {
                        break;
                    }
                }
            }
            if (code == 0) {
                throw Error(ErrorCode::UnknownCategory, "row " + std::to_string(i) + " has no single active indicator in '"
                                                            + schema[j].name + "'");
            }
            cols[j].emplace_back(Category{code});
        }
    }
    return Dataset(schema, std::move(cols));
}

} // namespace impbench
