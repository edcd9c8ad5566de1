#include "impbench/cart.hpp"
#include "impbench/errors.hpp"
#include "impbench/imputers.hpp"
#include "impbench/linear_model.hpp"
#include "impbench/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace impbench {

namespace {

using Columns = std::vector<Dataset::Column>;

double as_number(const Cell& c) { return std::get<double>(c); }
std::uint32_t as_code(const Cell& c) { return std::get<Category>(c).code; }

void initialize(Columns& cols, const Dataset& incomplete, FcsInit init, Rng& rng)
{
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
        if (init == FcsInit::MarginalDraw) {
            std::uniform_int_distribution<std::size_t> pick(0, observed.size() - 1);
            for (auto& cell : cols[j]) {
                if (is_missing(cell)) {
                    cell = observed[pick(rng)];
                }
            }
            continue;
        }
        Cell fill;
        if (incomplete.column_schema(j).is_categorical()) {
            std::vector<std::size_t> counts(incomplete.column_schema(j).levels() + 1, 0);
            for (const auto& c : observed) {
                ++counts[as_code(c)];
            }
            fill = Category{static_cast<std::uint32_t>(
                std::distance(counts.begin(), std::max_element(counts.begin() + 1, counts.end())))};
        } else {
            double s = 0.0;
            for (const auto& c : observed) {
                s += as_number(c);
            }
            fill = s / static_cast<double>(observed.size());
        }
        for (auto& cell : cols[j]) {
            if (is_missing(cell)) {
                cell = fill;
            }
        }
    }
}

FeatureMatrix features_of(const Dataset& current, std::span<const std::size_t> predictors)
{
    FeatureMatrix x;
    x.rows = current.rows();
    for (auto j : predictors) {
        const auto& col = current.column_schema(j);
        std::vector<double> values(current.rows());
        for (std::size_t i = 0; i < current.rows(); ++i) {
            values[i] = col.is_categorical() ? static_cast<double>(current.code(i, j)) : current.number(i, j);
        }
        x.columns.push_back(std::move(values));
        x.levels.push_back(col.is_categorical() ? static_cast<std::uint32_t>(col.levels()) : 0);
    }
    return x;
}

class ColumnSampler {
public:
    ColumnSampler(const Dataset& current, std::size_t target, std::span<const std::size_t> predictors,
                  std::span<const std::size_t> obs, std::span<const std::size_t> mis, const FcsOptions& options,
                  Rng& rng)
        : current_(current)
        , target_(target)
        , predictors_(predictors)
        , obs_(obs)
        , mis_(mis)
        , options_(options)
        , rng_(rng)
    {
    }

    std::vector<Cell> draw()
    {
        const bool categorical = current_.column_schema(target_).is_categorical();
        switch (options_.model) {
        case ColumnModel::Cart:
            return cart(categorical);
        case ColumnModel::Pmm:
            return categorical ? pmm_categorical() : pmm_numeric();
        case ColumnModel::Norm:
        case ColumnModel::NormNob:
        case ColumnModel::NormPredict:
            if (categorical) {
                throw Error(ErrorCode::Unsupported, "linear regression cannot impute categorical columns");
            }
            return norm();
        }
        throw Error(ErrorCode::Config, "unhandled column model");
    }

private:
    std::vector<Cell> cart(bool categorical)
    {
        const auto x = features_of(current_, predictors_);
        TreeOptions topts;
        topts.min_leaf = options_.min_leaf;
        const auto n = current_.rows();
        std::vector<Cell> out;
        out.reserve(mis_.size());
        DecisionTree tree = [&] {
            if (categorical) {
                std::vector<std::uint32_t> y(n, 1);
                for (auto i : obs_) {
                    y[i] = current_.code(i, target_);
                }
                const auto classes = static_cast<std::uint32_t>(current_.column_schema(target_).levels());
                return DecisionTree::fit_classification(x, y, classes, obs_, topts);
            }
            std::vector<double> y(n, 0.0);
            for (auto i : obs_) {
                y[i] = current_.number(i, target_);
            }
            return DecisionTree::fit_regression(x, y, obs_, topts);
        }();
        for (auto i : mis_) {
            const auto members = tree.leaf_members(tree.leaf_of(x, i));
            if (members.empty()) {
                throw Error(ErrorCode::Computational, "empty tree leaf");
            }
            std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
            out.push_back(current_.at(members[pick(rng_)], target_));
        }
        return out;
    }

    struct Design {
        DesignMatrix obs;
        DesignMatrix mis;
    };

    Design design() const
    {
        const auto layout = make_layout(current_, predictors_, obs_);
        return Design{build_design(current_, layout, obs_), build_design(current_, layout, mis_)};
    }

    std::vector<double> response(std::uint32_t level = 0) const
    {
        std::vector<double> y;
        y.reserve(obs_.size());
        for (auto i : obs_) {
            y.push_back(level == 0 ? current_.number(i, target_) : (current_.code(i, target_) == level ? 1.0 : 0.0));
        }
        return y;
    }

    std::vector<Cell> norm()
    {
        const auto d = design();
        const auto fit = fit_ols(d.obs, response());
        std::vector<double> beta = fit.beta;
        double sigma = 0.0;
        if (options_.model == ColumnModel::Norm) {
            auto draw = draw_coefficients(fit, rng_);
            beta = std::move(draw.beta);
            sigma = draw.sigma;
        } else if (options_.model == ColumnModel::NormNob) {
            sigma = fit.residual_sd;
        }
        std::normal_distribution<double> noise(0.0, 1.0);
        std::vector<Cell> out;
        out.reserve(mis_.size());
        for (std::size_t r = 0; r < mis_.size(); ++r) {
            double v = predict(beta, d.mis.row(r));
            if (sigma > 0.0) {
                v += sigma * noise(rng_);
            }
            out.emplace_back(v);
        }
        return out;
    }

    // Scores of observed rows under the fitted coefficients and of missing rows
    // under a posterior draw, one column block per response.
    void scores(const Design& d, const std::vector<std::vector<double>>& ys, std::vector<double>& s_obs,
                std::vector<double>& s_mis)
    {
        const auto dims = ys.size();
        s_obs.assign(obs_.size() * dims, 0.0);
        s_mis.assign(mis_.size() * dims, 0.0);
        for (std::size_t k = 0; k < dims; ++k) {
            const auto fit = fit_ols(d.obs, ys[k]);
            const auto draw = draw_coefficients(fit, rng_);
            for (std::size_t r = 0; r < obs_.size(); ++r) {
                s_obs[r * dims + k] = predict(fit.beta, d.obs.row(r));
            }
            for (std::size_t r = 0; r < mis_.size(); ++r) {
                s_mis[r * dims + k] = predict(draw.beta, d.mis.row(r));
            }
        }
    }

    std::vector<Cell> match(const std::vector<double>& s_obs, const std::vector<double>& s_mis, std::size_t dims)
    {
        const auto pool = std::min(options_.donors, obs_.size());
        std::vector<double> dist(obs_.size());
        std::vector<std::size_t> order(obs_.size());
        std::vector<Cell> out;
        out.reserve(mis_.size());
        for (std::size_t r = 0; r < mis_.size(); ++r) {
            for (std::size_t o = 0; o < obs_.size(); ++o) {
                double ss = 0.0;
                for (std::size_t k = 0; k < dims; ++k) {
                    const double diff = s_obs[o * dims + k] - s_mis[r * dims + k];
                    ss += diff * diff;
                }
                dist[o] = ss;
            }
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(pool), order.end(),
                              [&](std::size_t a, std::size_t b) {
                                  return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
                              });
            std::uniform_int_distribution<std::size_t> pick(0, pool - 1);
            out.push_back(current_.at(obs_[order[pick(rng_)]], target_));
        }
        return out;
    }

    std::vector<Cell> pmm_numeric()
    {
        const auto d = design();
        std::vector<double> s_obs, s_mis;
        scores(d, {response()}, s_obs, s_mis);
        return match(s_obs, s_mis, 1);
    }

    std::vector<Cell> pmm_categorical()
    {
        const auto d = design();
        const auto levels = static_cast<std::uint32_t>(current_.column_schema(target_).levels());
        std::vector<std::vector<double>> ys;
        for (std::uint32_t level = 1; level <= levels; ++level) {
            ys.push_back(response(level));
        }
        std::vector<double> s_obs, s_mis;
        scores(d, ys, s_obs, s_mis);
        return match(s_obs, s_mis, ys.size());
    }

    const Dataset& current_;
    std::size_t target_;
    std::span<const std::size_t> predictors_;
    std::span<const std::size_t> obs_;
    std::span<const std::size_t> mis_;
    const FcsOptions& options_;
    Rng& rng_;
};

} // namespace

Dataset impute_fcs(const Dataset& incomplete, const FcsOptions& options, std::uint64_t seed)
{
    if (options.iterations < 0) {
        throw Error(ErrorCode::Config, "iterations must be non-negative");
    }
    if (options.donors == 0) {
        throw Error(ErrorCode::Config, "pmm needs at least one donor");
    }
    const auto n = incomplete.rows();
    const auto p = incomplete.cols();
    auto rng = make_rng(seed);

    std::vector<std::vector<std::size_t>> obs(p), mis(p);
    std::vector<std::size_t> targets;
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            (incomplete.is_missing(i, j) ? mis[j] : obs[j]).push_back(i);
        }
        if (!mis[j].empty()) {
            targets.push_back(j);
        }
    }

    Columns cols = incomplete.columns();
    initialize(cols, incomplete, options.init, rng);

    for (int iter = 0; iter < options.iterations; ++iter) {
        for (auto j : targets) {
            std::vector<std::size_t> predictors;
            for (std::size_t c = 0; c < p; ++c) {
                if (c != j) {
                    predictors.push_back(c);
                }
            }
            const Dataset current(incomplete.schema(), cols);
            ColumnSampler sampler(current, j, predictors, obs[j], mis[j], options, rng);
            auto drawn = sampler.draw();
            for (std::size_t r = 0; r < mis[j].size(); ++r) {
                cols[j][mis[j][r]] = std::move(drawn[r]);
            }
        }
    }
    return Dataset(incomplete.schema(), std::move(cols));
}

} // namespace impbench
