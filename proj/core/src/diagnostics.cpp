#include "impbench/diagnostics.hpp"

#include "impbench/random.hpp"

#include <algorithm>

namespace impbench {

std::string_view to_string(CategoricalFormat format) noexcept
{
    switch (format) {
    case CategoricalFormat::Integer:
        return "integer";
    case CategoricalFormat::Label:
        return "label";
    case CategoricalFormat::OneHot:
        return "one_hot";
    }
    return "unknown";
}

bool DiagnosticReport::capable() const noexcept
{
    return std::any_of(results.begin(), results.end(), [](const DiagnosticResult& r) { return r.verdict.success(); });
}

namespace {

constexpr std::size_t kRows = 60;
constexpr std::uint32_t kLevels = 3;

struct Base {
    std::vector<double> x1;
    std::vector<double> x2;
    std::vector<std::uint32_t> level;
    std::vector<bool> level_missing;
    std::vector<bool> x2_missing;
};

Base make_base(std::uint64_t seed)
{
    auto rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Base b;
    for (std::size_t i = 0; i < kRows; ++i) {
        const double x1 = normal(rng);
        b.x1.push_back(x1);
        b.x2.push_back(0.8 * x1 + 0.6 * normal(rng));
        // Each level appears 20 times, more than the 12 masked rows.
        b.level.push_back(static_cast<std::uint32_t>(i % kLevels) + 1);
    }
    b.level_missing.assign(kRows, false);
    b.x2_missing.assign(kRows, false);
    std::vector<std::size_t> rows(kRows);
    for (std::size_t i = 0; i < kRows; ++i) {
        rows[i] = i;
    }
    std::shuffle(rows.begin(), rows.end(), rng);
    for (std::size_t t = 0; t < kRows / 5; ++t) {
        b.level_missing[rows[t]] = true;
    }
    for (std::size_t t = kRows / 5; t < kRows / 5 + kRows / 10; ++t) {
        b.x2_missing[rows[t]] = true;
    }
    return b;
}

DiagnosticCase categorical_case(const Base& b, CategoricalFormat format, std::vector<std::string> labels)
{
    Schema schema{ColumnSchema::numeric("x1"), ColumnSchema::numeric("x2"),
                  ColumnSchema::categorical("colour", std::move(labels))};
    std::vector<Dataset::Column> full(3), holes(3);
    for (std::size_t i = 0; i < kRows; ++i) {
        full[0].emplace_back(b.x1[i]);
        full[1].emplace_back(b.x2[i]);
        full[2].emplace_back(Category{b.level[i]});
        holes[0].emplace_back(b.x1[i]);
        holes[1].push_back(b.x2_missing[i] ? Cell{Missing{}} : Cell{b.x2[i]});
        holes[2].push_back(b.level_missing[i] ? Cell{Missing{}} : Cell{Category{b.level[i]}});
    }
    return {format, Dataset(schema, std::move(full)), Dataset(schema, std::move(holes)), {}};
}

DiagnosticCase one_hot_case(const Base& b)
{
    Schema schema{ColumnSchema::numeric("x1"), ColumnSchema::numeric("x2")};
    OneHotGroup group{"colour", {}};
    for (std::uint32_t level = 1; level <= kLevels; ++level) {
        schema.push_back(ColumnSchema::numeric("colour_" + std::to_string(level)));
        group.columns.push_back(1 + level);
    }
    std::vector<Dataset::Column> full(schema.size()), holes(schema.size());
    for (std::size_t i = 0; i < kRows; ++i) {
        full[0].emplace_back(b.x1[i]);
        full[1].emplace_back(b.x2[i]);
        holes[0].emplace_back(b.x1[i]);
        holes[1].push_back(b.x2_missing[i] ? Cell{Missing{}} : Cell{b.x2[i]});
        for (std::uint32_t level = 1; level <= kLevels; ++level) {
            const double v = b.level[i] == level ? 1.0 : 0.0;
            full[1 + level].emplace_back(v);
            holes[1 + level].push_back(b.level_missing[i] ? Cell{Missing{}} : Cell{v});
        }
    }
    return {CategoricalFormat::OneHot, Dataset(schema, std::move(full)), Dataset(schema, std::move(holes)), {group}};
}

} // namespace

std::vector<DiagnosticCase> categorical_diagnostic_cases(std::uint64_t seed)
{
    const auto base = make_base(seed);
    std::vector<DiagnosticCase> cases;
    cases.push_back(categorical_case(base, CategoricalFormat::Integer, {"1", "2", "3"}));
    cases.push_back(categorical_case(base, CategoricalFormat::Label, {"red", "green", "blue"}));
    cases.push_back(one_hot_case(base));
    return cases;
}

DiagnosticReport run_categorical_diagnostics(const Imputer& imputer, std::uint64_t seed, const RetryOptions& options)
{
    DiagnosticReport report;
    for (const auto& c : categorical_diagnostic_cases(seed)) {
        const auto run = run_with_retry(imputer, c.incomplete, seed, options, c.one_hot);
        report.results.push_back({c.format, run.verdict});
    }
    return report;
}

} // namespace impbench
