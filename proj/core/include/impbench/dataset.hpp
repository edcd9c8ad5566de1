#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace impbench {

enum class ColumnKind { Numeric, Categorical };

// Categorical columns carry their ordered label list; the cell code k refers
// to categories[k - 1].
struct ColumnSchema {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    std::vector<std::string> categories;

    static ColumnSchema numeric(std::string name);
    static ColumnSchema categorical(std::string name, std::vector<std::string> categories);

    [[nodiscard]] bool is_categorical() const noexcept { return kind == ColumnKind::Categorical; }
    [[nodiscard]] std::size_t levels() const noexcept { return categories.size(); }
    [[nodiscard]] std::optional<std::uint32_t> code_of(std::string_view label) const;

    bool operator==(const ColumnSchema&) const = default;
};

using Schema = std::vector<ColumnSchema>;

void check_schema(const Schema& schema);

struct Missing {
    bool operator==(const Missing&) const = default;
};

// 1-based category code. Code 0 never names a valid level.
struct Category {
    std::uint32_t code = 0;
    bool operator==(const Category&) const = default;
};

using Cell = std::variant<Missing, double, Category>;

inline bool is_missing(const Cell& c) noexcept { return std::holds_alternative<Missing>(c); }

class Mask {
public:
    Mask() = default;
    Mask(std::size_t rows, std::size_t cols, bool value = false);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    [[nodiscard]] bool operator()(std::size_t i, std::size_t j) const noexcept
    {
        return bits_[i * cols_ + j] != 0;
    }
    void set(std::size_t i, std::size_t j, bool value) noexcept { bits_[i * cols_ + j] = value ? 1 : 0; }

    [[nodiscard]] std::size_t count() const noexcept;
    [[nodiscard]] std::size_t count_column(std::size_t j) const noexcept;
    [[nodiscard]] double fraction() const noexcept;

    bool operator==(const Mask&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint8_t> bits_;
};

struct Unchecked {};
inline constexpr Unchecked unchecked{};

// Column-major table of mixed cells. Immutable once built; transformations
// return new datasets. The missingness mask is derived from the cells, so
// the mask and the Missing sentinel can never disagree.
class Dataset {
public:
    using Column = std::vector<Cell>;

    Dataset(Schema schema, std::vector<Column> columns);
    // Skips the category-range check. Used for foreign imputer output so that
    // out-of-range labels survive until validation classifies them.
    Dataset(Unchecked, Schema schema, std::vector<Column> columns);

    static Dataset from_numeric(std::vector<std::string> names, const std::vector<std::vector<double>>& columns);

    [[nodiscard]] std::size_t rows() const noexcept { return columns_.empty() ? 0 : columns_.front().size(); }
    [[nodiscard]] std::size_t cols() const noexcept { return columns_.size(); }
    [[nodiscard]] const Schema& schema() const noexcept { return schema_; }
    [[nodiscard]] const ColumnSchema& column_schema(std::size_t j) const { return schema_.at(j); }
    [[nodiscard]] std::span<const Cell> column(std::size_t j) const { return columns_.at(j); }
    [[nodiscard]] const std::vector<Column>& columns() const noexcept { return columns_; }
    [[nodiscard]] const Cell& at(std::size_t i, std::size_t j) const { return columns_[j][i]; }

    [[nodiscard]] bool is_missing(std::size_t i, std::size_t j) const { return impbench::is_missing(columns_[j][i]); }
    [[nodiscard]] double number(std::size_t i, std::size_t j) const;
    [[nodiscard]] std::uint32_t code(std::size_t i, std::size_t j) const;

    [[nodiscard]] Mask mask() const;
    [[nodiscard]] std::size_t missing_count() const noexcept;
    [[nodiscard]] bool has_missing() const noexcept { return missing_count() > 0; }
    [[nodiscard]] bool has_categorical() const noexcept;
    [[nodiscard]] std::size_t index_of(std::string_view name) const;

    // Observed values of a numeric column, in row order.
    [[nodiscard]] std::vector<double> observed_numbers(std::size_t j) const;

    // Copy with every cell flagged in `mask` replaced by Missing.
    [[nodiscard]] Dataset with_mask(const Mask& mask) const;
    [[nodiscard]] Dataset select_columns(std::span<const std::size_t> cols) const;
    [[nodiscard]] Dataset select_rows(std::span<const std::size_t> rows) const;

    bool operator==(const Dataset&) const = default;

private:
    void check_shape() const;
    void check_categories() const;

    Schema schema_;
    std::vector<Column> columns_;
};

struct ColumnStats {
    double mean = 0.0;
    double sd = 1.0;
    bool operator==(const ColumnStats&) const = default;
};

// Per-column standardization moments estimated from complete data; empty for
// categorical columns.
struct StandardizationStats {
    std::vector<std::optional<ColumnStats>> columns;
};

StandardizationStats compute_stats(const Dataset& complete);
Dataset standardize(const Dataset& data, const StandardizationStats& stats);
Dataset unstandardize(const Dataset& data, const StandardizationStats& stats);

struct ColumnSpan {
    std::size_t first = 0;
    std::size_t width = 1;
    bool operator==(const ColumnSpan&) const = default;
};

// Row-major real matrix; categorical columns expand to one indicator per level.
class EncodedMatrix {
public:
    EncodedMatrix() = default;
    EncodedMatrix(std::size_t rows, std::size_t dims, std::vector<double> values, std::vector<ColumnSpan> spans = {});

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t dims() const noexcept { return dims_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t k) const noexcept { return values_[i * dims_ + k]; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept { return {values_.data() + i * dims_, dims_}; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] const std::vector<ColumnSpan>& spans() const noexcept { return spans_; }

    bool operator==(const EncodedMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t dims_ = 0;
    std::vector<double> values_;
    std::vector<ColumnSpan> spans_;
};

EncodedMatrix one_hot_encode(const Dataset& data);
Dataset decode(const EncodedMatrix& encoded, const Schema& schema);

} // namespace impbench
