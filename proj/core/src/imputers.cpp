#include "impbench/imputers.hpp"

#include "impbench/errors.hpp"
#include "impbench/random.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>

namespace impbench {

namespace {

struct KindInfo {
    ImputerKind kind;
    std::string_view name;
    bool categorical;
    bool deterministic;
};

constexpr KindInfo kKinds[] = {
    {ImputerKind::Mean, "mean", false, true},
    {ImputerKind::Median, "median", true, true},
    {ImputerKind::Zero, "zero", false, true},
    {ImputerKind::Random, "random", true, false},
    {ImputerKind::KNN, "knn", true, true},
    {ImputerKind::Norm, "norm", false, false},
    {ImputerKind::NormNob, "norm.nob", false, false},
    {ImputerKind::NormPredict, "norm.predict", false, true},
    {ImputerKind::PMM, "pmm", true, false},
    {ImputerKind::CartFCS, "cart", true, false},
    {ImputerKind::External, "external", false, false},
};

const KindInfo& info(ImputerKind kind)
{
    for (const auto& k : kKinds) {
        if (k.kind == kind) {
            return k;
        }
    }
    throw Error(ErrorCode::Config, "unknown imputer kind");
}

} // namespace

std::string_view to_string(ImputerKind kind) noexcept
{
    for (const auto& k : kKinds) {
        if (k.kind == kind) {
            return k.name;
        }
    }
    return "unknown";
}

ImputerKind parse_imputer_kind(std::string_view s)
{
    for (const auto& k : kKinds) {
        if (k.name == s) {
            return k.kind;
        }
    }
    static const std::map<std::string_view, ImputerKind> aliases = {
        {"Mean", ImputerKind::Mean},         {"Median", ImputerKind::Median},
        {"Zero", ImputerKind::Zero},         {"Random", ImputerKind::Random},
        {"KNN", ImputerKind::KNN},           {"Norm", ImputerKind::Norm},
        {"NormNob", ImputerKind::NormNob},   {"NormPredict", ImputerKind::NormPredict},
        {"PMM", ImputerKind::PMM},           {"CartFCS", ImputerKind::CartFCS},
        {"External", ImputerKind::External},
    };
    if (auto it = aliases.find(s); it != aliases.end()) {
        return it->second;
    }
    throw Error(ErrorCode::Config, "unknown imputer kind '" + std::string(s) + "'");
}

bool kind_supports_categorical(ImputerKind kind) noexcept
{
    for (const auto& k : kKinds) {
        if (k.kind == kind) {
            return k.categorical;
        }
    }
    return false;
}

bool kind_is_deterministic(ImputerKind kind) noexcept
{
    for (const auto& k : kKinds) {
        if (k.kind == kind) {
            return k.deterministic;
        }
    }
    return false;
}

ImputerSpec ImputerSpec::of(ImputerKind kind, std::string name)
{
    ImputerSpec spec;
    spec.kind = kind;
    spec.name = name.empty() ? std::string(info(kind).name) : std::move(name);
    spec.supports_categorical = info(kind).categorical;
    return spec;
}

namespace {

template <typename F>
Dataset fill_missing(const Dataset& incomplete, F&& value_for_column)
{
    auto cols = incomplete.columns();
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (std::none_of(cols[j].begin(), cols[j].end(), [](const Cell& c) { return is_missing(c); })) {
            continue;
        }
        const Cell fill = value_for_column(j);
        for (auto& cell : cols[j]) {
            if (is_missing(cell)) {
                cell = fill;
            }
        }
    }
    return Dataset(incomplete.schema(), std::move(cols));
}

void require_numeric(const Dataset& data, std::string_view method)
{
    if (data.has_categorical()) {
        throw Error(ErrorCode::Unsupported, std::string(method) + " cannot impute categorical columns");
    }
}

std::vector<double> require_observed(const Dataset& data, std::size_t j)
{
    auto values = data.observed_numbers(j);
    if (values.empty()) {
        throw Error(ErrorCode::InsufficientData, "column '" + data.column_schema(j).name + "' has no observed values");
    }
    return values;
}

std::uint32_t mode_of(const Dataset& data, std::size_t j)
{
    std::vector<std::size_t> counts(data.column_schema(j).levels() + 1, 0);
    bool any = false;
    for (const auto& cell : data.column(j)) {
        if (const auto* c = std::get_if<Category>(&cell)) {
            ++counts[c->code];
            any = true;
        }
    }
    if (!any) {
        throw Error(ErrorCode::InsufficientData, "column '" + data.column_schema(j).name + "' has no observed values");
    }
    return static_cast<std::uint32_t>(std::distance(counts.begin(), std::max_element(counts.begin() + 1, counts.end())));
}

} // namespace

Dataset impute_mean(const Dataset& incomplete)
{
    require_numeric(incomplete, "mean");
    return fill_missing(incomplete, [&](std::size_t j) -> Cell {
        const auto v = require_observed(incomplete, j);
        return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    });
}

Dataset impute_median(const Dataset& incomplete)
{
    return fill_missing(incomplete, [&](std::size_t j) -> Cell {
        if (incomplete.column_schema(j).is_categorical()) {
            return Category{mode_of(incomplete, j)};
        }
        auto v = require_observed(incomplete, j);
        std::sort(v.begin(), v.end());
        const auto m = v.size() / 2;
        return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
    });
}

Dataset impute_zero(const Dataset& incomplete)
{
    require_numeric(incomplete, "zero");
    return fill_missing(incomplete, [](std::size_t) -> Cell { return 0.0; });
}

Dataset impute_random(const Dataset& incomplete, std::uint64_t seed)
{
    auto rng = make_rng(seed);
    auto cols = incomplete.columns();
    for (std::size_t j = 0; j < cols.size(); ++j) {
        std::vector<Cell> observed;
        for (const auto& cell : cols[j]) {
            if (!is_missing(cell)) {
                observed.push_back(cell);
            }
        }
        if (observed.size() == cols[j].size()) {
            continue;
        }
        if (observed.empty()) {
            throw Error(ErrorCode::InsufficientData, "column '" + incomplete.column_schema(j).name
                                                         + "' has no observed values");
        }
        std::uniform_int_distribution<std::size_t> pick(0, observed.size() - 1);
        for (auto& cell : cols[j]) {
            if (is_missing(cell)) {
                cell = observed[pick(rng)];
            }
        }
    }
    return Dataset(incomplete.schema(), std::move(cols));
}

namespace {

class BuiltinImputer final : public Imputer {
public:
    explicit BuiltinImputer(ImputerSpec spec)
        : spec_(std::move(spec))
    {
    }

    const std::string& name() const noexcept override { return spec_.name; }
    bool supports_categorical() const noexcept override { return spec_.supports_categorical; }
    bool deterministic() const noexcept override { return kind_is_deterministic(spec_.kind); }
    double enforced_timeout() const noexcept override
    {
        return spec_.kind == ImputerKind::External ? spec_.timeout_seconds : 0.0;
    }

    Dataset run(const Dataset& incomplete, std::uint64_t seed) const override
    {
        if (incomplete.has_categorical() && !supports_categorical()) {
            throw Error(ErrorCode::Unsupported, spec_.name + " does not support categorical columns");
        }
        switch (spec_.kind) {
        case ImputerKind::Mean:
            return impute_mean(incomplete);
        case ImputerKind::Median:
            return impute_median(incomplete);
        case ImputerKind::Zero:
            return impute_zero(incomplete);
        case ImputerKind::Random:
            return impute_random(incomplete, seed);
        case ImputerKind::KNN:
            return impute_knn(incomplete, KnnOptions{spec_.k});
        case ImputerKind::Norm:
            return impute_fcs(incomplete, fcs(ColumnModel::Norm, FcsInit::MarginalDraw), seed);
        case ImputerKind::NormNob:
            return impute_fcs(incomplete, fcs(ColumnModel::NormNob, FcsInit::MarginalDraw), seed);
        case ImputerKind::NormPredict:
            return impute_fcs(incomplete, fcs(ColumnModel::NormPredict, FcsInit::MeanFill), seed);
        case ImputerKind::PMM:
            return impute_fcs(incomplete, fcs(ColumnModel::Pmm, FcsInit::MarginalDraw), seed);
        case ImputerKind::CartFCS:
            return impute_fcs(incomplete, fcs(ColumnModel::Cart, FcsInit::MarginalDraw), seed);
        case ImputerKind::External:
            return impute_external(incomplete, ExternalOptions{spec_.command, spec_.timeout_seconds, "NA"}, seed);
        }
        throw Error(ErrorCode::Config, "unhandled imputer kind");
    }

private:
    FcsOptions fcs(ColumnModel model, FcsInit init) const
    {
        FcsOptions o;
        o.model = model;
        o.init = init;
        o.iterations = spec_.iterations;
        o.min_leaf = spec_.min_leaf;
        o.donors = spec_.donors;
        return o;
    }

    ImputerSpec spec_;
};

} // namespace

std::unique_ptr<Imputer> make_imputer(const ImputerSpec& spec)
{
    if (spec.kind == ImputerKind::External && spec.command.empty()) {
        throw Error(ErrorCode::Config, "external imputer '" + spec.name + "' has no command");
    }
    if (spec.kind == ImputerKind::KNN && spec.k == 0) {
        throw Error(ErrorCode::Config, "knn needs k >= 1");
    }
    if (spec.kind == ImputerKind::PMM && spec.donors == 0) {
        throw Error(ErrorCode::Config, "pmm needs at least one donor");
    }
    if (spec.iterations < 0) {
        throw Error(ErrorCode::Config, "iterations must be non-negative");
    }
    return std::make_unique<BuiltinImputer>(spec);
}

ImputationResult impute(const Imputer& imputer, const Dataset& incomplete, std::uint64_t seed)
{
    const auto start = std::chrono::steady_clock::now();
    Dataset out = imputer.run(incomplete, seed);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    return ImputationResult{std::move(out), elapsed.count(), 1, {}};
}

ImputationResult impute(const ImputerSpec& spec, const Dataset& incomplete)
{
    return impute(*make_imputer(spec), incomplete, spec.seed);
}

ImputationResult impute_multiple(const Imputer& imputer, const Dataset& incomplete, std::uint64_t seed, int m)
{
    if (m < 1) {
        throw Error(ErrorCode::Config, "number of draws must be at least 1");
    }
    const auto start = std::chrono::steady_clock::now();
    std::vector<Dataset> draws;
    draws.reserve(static_cast<std::size_t>(m));
    for (int l = 0; l < m; ++l) {
        if (l > 0 && imputer.deterministic()) {
            draws.push_back(draws.front());
        } else {
            draws.push_back(imputer.run(incomplete, seed + static_cast<std::uint64_t>(l)));
        }
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    Dataset first = draws.front();
    return ImputationResult{std::move(first), elapsed.count(), 1, std::move(draws)};
}

ImputationResult impute_multiple(const ImputerSpec& spec, const Dataset& incomplete, int m)
{
    return impute_multiple(*make_imputer(spec), incomplete, spec.seed, m);
}

} // namespace impbench
