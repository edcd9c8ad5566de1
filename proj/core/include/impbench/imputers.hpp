#pragma once

#include "impbench/dataset.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace impbench {

enum class ImputerKind { Mean, Median, Zero, Random, KNN, Norm, NormNob, NormPredict, PMM, CartFCS, External };

std::string_view to_string(ImputerKind kind) noexcept;
ImputerKind parse_imputer_kind(std::string_view s);
bool kind_supports_categorical(ImputerKind kind) noexcept;
bool kind_is_deterministic(ImputerKind kind) noexcept;

inline constexpr double kDefaultExternalTimeout = 300.0;

struct ImputerSpec {
    std::string name;
    ImputerKind kind = ImputerKind::Mean;
    std::size_t k = 5;          // KNN neighbours
    std::size_t donors = 5;     // PMM donor pool
    int iterations = 5;         // FCS sweeps
    std::size_t min_leaf = 5;   // CART leaf size
    std::string command;        // External
    double timeout_seconds = kDefaultExternalTimeout;
    std::uint64_t seed = 0;
    bool supports_categorical = false;

    // Defaults for the kind; the name defaults to the conventional method name.
    static ImputerSpec of(ImputerKind kind, std::string name = {});
};

struct ImputationResult {
    Dataset imputed;
    double duration_seconds = 0.0;
    int attempts = 1;
    std::vector<Dataset> draws;
};

// Stateless imputation strategy. run() returns the completed dataset or throws
// impbench::Error.
class Imputer {
public:
    virtual ~Imputer() = default;

    [[nodiscard]] virtual const std::string& name() const noexcept = 0;
    [[nodiscard]] virtual bool supports_categorical() const noexcept = 0;
    [[nodiscard]] virtual bool deterministic() const noexcept = 0;
    // Wall-clock limit enforced by the imputer itself (external processes); 0 = none.
    [[nodiscard]] virtual double enforced_timeout() const noexcept { return 0.0; }

    [[nodiscard]] virtual Dataset run(const Dataset& incomplete, std::uint64_t seed) const = 0;
};

std::unique_ptr<Imputer> make_imputer(const ImputerSpec& spec);

// Wraps a callable; handy for fixtures and oracle samplers.
class FunctionImputer final : public Imputer {
public:
    using Fn = std::function<Dataset(const Dataset&, std::uint64_t)>;

    FunctionImputer(std::string name, Fn fn, bool supports_categorical = true, bool deterministic = false)
        : name_(std::move(name))
        , fn_(std::move(fn))
        , categorical_(supports_categorical)
        , deterministic_(deterministic)
    {
    }

    const std::string& name() const noexcept override { return name_; }
    bool supports_categorical() const noexcept override { return categorical_; }
    bool deterministic() const noexcept override { return deterministic_; }
    Dataset run(const Dataset& incomplete, std::uint64_t seed) const override { return fn_(incomplete, seed); }

private:
    std::string name_;
    Fn fn_;
    bool categorical_;
    bool deterministic_;
};

ImputationResult impute(const ImputerSpec& spec, const Dataset& incomplete);
ImputationResult impute(const Imputer& imputer, const Dataset& incomplete, std::uint64_t seed);

// m draws with seeds seed, seed + 1, ...; deterministic imputers run once and
// the result is repeated.
ImputationResult impute_multiple(const Imputer& imputer, const Dataset& incomplete, std::uint64_t seed, int m);
ImputationResult impute_multiple(const ImputerSpec& spec, const Dataset& incomplete, int m);

Dataset impute_mean(const Dataset& incomplete);
// Numeric median; categorical columns take the mode.
Dataset impute_median(const Dataset& incomplete);
Dataset impute_zero(const Dataset& incomplete);
// Uniform draw from the column's observed cells.
Dataset impute_random(const Dataset& incomplete, std::uint64_t seed);

struct KnnOptions {
    std::size_t k = 5;
};

// Mean (numeric) or mode (categorical) of the k nearest donor rows. Distance
// is Euclidean over mutually observed dims (numeric z-scored with observed
// moments, categorical 0/1 mismatch), rescaled by p / mutual dims.
Dataset impute_knn(const Dataset& incomplete, const KnnOptions& options);

enum class ColumnModel { Cart, Norm, NormNob, NormPredict, Pmm };
enum class FcsInit { MarginalDraw, MeanFill };

struct FcsOptions {
    ColumnModel model = ColumnModel::Cart;
    int iterations = 5;
    std::size_t min_leaf = 5;
    std::size_t donors = 5;
    FcsInit init = FcsInit::MarginalDraw;
};

// Chained equations: initialize, then sweep the incomplete columns left to
// right `iterations` times, refitting each column's model on the current
// completed data and redrawing its missing cells.
Dataset impute_fcs(const Dataset& incomplete, const FcsOptions& options, std::uint64_t seed);

struct ExternalOptions {
    std::string command;
    double timeout_seconds = kDefaultExternalTimeout;
    std::string na_token = "NA";
};

// Runs `command <in.csv> <out.csv> <seed>` through /bin/sh. Raises Timeout when
// the limit is hit and Computational on nonzero exit or malformed output.
// Out-of-range category labels in the output are kept as Category{0}.
Dataset impute_external(const Dataset& incomplete, const ExternalOptions& options, std::uint64_t seed);

} // namespace impbench
