#include "impbench/iscore.hpp"

#include "impbench/errors.hpp"
#include "impbench/random.hpp"

#include <cmath>
#include <numbers>

namespace impbench {

std::vector<std::size_t> projection_set(const Dataset& data, std::size_t j)
{
    std::vector<bool> always(data.cols(), true);
    for (std::size_t i = 0; i < data.rows(); ++i) {
        if (data.is_missing(i, j)) {
            continue;
        }
        for (std::size_t c = 0; c < data.cols(); ++c) {
            if (data.is_missing(i, c)) {
                always[c] = false;
            }
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < data.cols(); ++c) {
        if (c != j && always[c]) {
            out.push_back(c);
        }
    }
    return out;
}

namespace {

template <typename T, typename Dist>
double cell_term(std::span<const T> draws, T truth, Dist dist)
{
    const double n = static_cast<double>(draws.size());
    double spread = 0.0;
    double error = 0.0;
    for (std::size_t l = 0; l < draws.size(); ++l) {
        for (std::size_t m = 0; m < draws.size(); ++m) {
            spread += dist(draws[l], draws[m]);
        }
        error += dist(draws[l], truth);
    }
    return spread / (2.0 * n * n) - error / n;
}

// Internal draws must be complete and in range; anything else counts as a
// failure of the method.
void check_draw(const Dataset& draw, const Dataset& projected)
{
    if (draw.rows() != projected.rows() || draw.schema() != projected.schema()) {
        throw Error(ErrorCode::Computational, "internal imputation changed the data shape");
    }
    for (std::size_t j = 0; j < draw.cols(); ++j) {
        const auto levels = draw.column_schema(j).levels();
        for (std::size_t i = 0; i < draw.rows(); ++i) {
            const auto& cell = draw.at(i, j);
            if (is_missing(cell)) {
                throw Error(ErrorCode::Computational, "internal imputation left missing values");
            }
            if (const auto* c = std::get_if<Category>(&cell); c && (c->code == 0 || c->code > levels)) {
                throw Error(ErrorCode::Computational, "internal imputation produced an invalid category");
            }
            if (const auto* v = std::get_if<double>(&cell); v && !std::isfinite(*v)) {
                throw Error(ErrorCode::Computational, "internal imputation produced a non-finite value");
            }
        }
    }
}

template <typename F>
auto guarded(F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Timeout || e.code() == ErrorCode::Unsupported
            || e.code() == ErrorCode::Computational) {
            throw;
        }
        throw Error(ErrorCode::Computational, e.what());
    } catch (const std::exception& e) {
        throw Error(ErrorCode::Computational, e.what());
    }
}

} // namespace

double iscore_cell(std::span<const double> draws, double truth)
{
    return cell_term<double>(draws, truth, [](double a, double b) { return std::abs(a - b); });
}

double iscore_cell(std::span<const std::uint32_t> draws, std::uint32_t truth)
{
    return cell_term<std::uint32_t>(draws, truth,
                                    [](std::uint32_t a, std::uint32_t b) { return a == b ? 0.0 : std::numbers::sqrt2; });
}

IScoreResult energy_iscore(const Dataset& incomplete, const Imputer& imputer, std::uint64_t seed,
                           const IScoreConfig& config, const Dataset* initial)
{
    if (config.draws < 2) {
        throw Error(ErrorCode::Config, "the I-Score needs at least two draws");
    }
    if (!incomplete.has_missing()) {
        throw Error(ErrorCode::EmptyInput, "the I-Score needs data with missing values");
    }
    if (incomplete.has_categorical() && !imputer.supports_categorical()) {
        throw Error(ErrorCode::Unsupported, imputer.name() + " does not support categorical columns");
    }

    Dataset filled = initial ? *initial : guarded([&] { return imputer.run(incomplete, seed); });
    if (initial && (filled.rows() != incomplete.rows() || filled.schema() != incomplete.schema())) {
        throw Error(ErrorCode::ColumnMismatch, "initial imputation differs in shape from the data");
    }
    check_draw(filled, incomplete);

    IScoreResult result;
    double total = 0.0;
    std::size_t scored = 0;
    for (std::size_t j = 0; j < incomplete.cols(); ++j) {
        std::vector<std::size_t> evaluated;
        for (std::size_t i = 0; i < incomplete.rows(); ++i) {
            if (!incomplete.is_missing(i, j)) {
                evaluated.push_back(i);
            }
        }
        if (evaluated.size() == incomplete.rows()) {
            continue;
        }
        ColumnIScore col;
        col.column = j;
        col.projection = projection_set(incomplete, j);
        col.evaluated_rows = evaluated.size();
        if (evaluated.empty()) {
            result.columns.push_back(std::move(col));
            continue;
        }

        std::vector<std::size_t> keep = col.projection;
        keep.push_back(j);
        const Dataset projected_full = filled.select_columns(keep);
        const std::size_t target = keep.size() - 1;
        Mask mask(projected_full.rows(), projected_full.cols());
        for (auto i : evaluated) {
            mask.set(i, target, true);
        }
        const Dataset projected = projected_full.with_mask(mask);
        const auto draw_seed = mix_seed(seed, j + 1);
        const auto draws = guarded([&] { return impute_multiple(imputer, projected, draw_seed, config.draws); });

        for (const auto& d : draws.draws) {
            check_draw(d, projected);
        }
        const bool categorical = incomplete.column_schema(j).is_categorical();
        double sum = 0.0;
        std::vector<double> numbers(draws.draws.size());
        std::vector<std::uint32_t> codes(draws.draws.size());
        for (auto i : evaluated) {
            for (std::size_t l = 0; l < draws.draws.size(); ++l) {
                if (categorical) {
                    codes[l] = draws.draws[l].code(i, target);
                } else {
                    numbers[l] = draws.draws[l].number(i, target);
                }
            }
            sum += categorical ? iscore_cell(codes, incomplete.code(i, j)) : iscore_cell(numbers, incomplete.number(i, j));
        }
        col.value = sum / static_cast<double>(evaluated.size());
        total += *col.value;
        ++scored;
        result.columns.push_back(std::move(col));
    }
    result.score = make_score(Metric::EnergyIScore,
                              scored == 0 ? std::nullopt : std::optional<double>(total / static_cast<double>(scored)));
    return result;
}

} // namespace impbench
