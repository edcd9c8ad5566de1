#include "impbench/linear_model.hpp"

#include "impbench/errors.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace impbench {

LinearFit fit_ols(const DesignMatrix& x, std::span<const double> y)
{
    const auto n = x.rows;
    const auto q = x.cols;
    if (y.size() != n) {
        throw Error(ErrorCode::ColumnMismatch, "response length differs from design rows");
    }
    if (q == 0 || n < q + 1) {
        throw Error(ErrorCode::InsufficientData,
                    "regression on " + std::to_string(q) + " parameters needs more than " + std::to_string(n) + " rows");
    }
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> X(
        x.values.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(q));
    const Eigen::Map<const Eigen::VectorXd> Y(y.data(), static_cast<Eigen::Index>(n));

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < static_cast<Eigen::Index>(q)) {
        throw Error(ErrorCode::RankDeficient, "design has rank " + std::to_string(qr.rank()) + " < " + std::to_string(q));
    }
    const Eigen::VectorXd beta = qr.solve(Y);
    const Eigen::VectorXd resid = Y - X * beta;

    const Eigen::MatrixXd xtx = X.transpose() * X;
    const Eigen::MatrixXd inv = xtx.llt().solve(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(q),
                                                                          static_cast<Eigen::Index>(q)));
    Eigen::LLT<Eigen::MatrixXd> chol(inv);
    if (chol.info() != Eigen::Success) {
        throw Error(ErrorCode::RankDeficient, "(X'X)^-1 is not positive definite");
    }
    const Eigen::MatrixXd L = chol.matrixL();

    LinearFit fit;
    fit.n = n;
    fit.beta.assign(beta.data(), beta.data() + q);
    fit.rss = resid.squaredNorm();
    fit.residual_sd = std::sqrt(fit.rss / static_cast<double>(n - q));
    fit.unscaled_cov_chol.resize(q * q);
    for (std::size_t r = 0; r < q; ++r) {
        for (std::size_t c = 0; c < q; ++c) {
            fit.unscaled_cov_chol[r * q + c] = L(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
    }
    return fit;
}

CoefficientDraw draw_coefficients(const LinearFit& fit, Rng& rng)
{
    const auto q = fit.beta.size();
    std::chi_squared_distribution<double> chi(static_cast<double>(fit.df()));
    double g = chi(rng);
    while (g <= 0.0) {
        g = chi(rng);
    }
    CoefficientDraw draw;
    draw.sigma = std::sqrt(fit.rss / g);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> z(q);
    for (auto& v : z) {
        v = normal(rng);
    }
    draw.beta = fit.beta;
    for (std::size_t r = 0; r < q; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c <= r; ++c) {
            s += fit.unscaled_cov_chol[r * q + c] * z[c];
        }
        draw.beta[r] += draw.sigma * s;
    }
    return draw;
}

double predict(std::span<const double> beta, std::span<const double> row) noexcept
{
    double s = 0.0;
    for (std::size_t k = 0; k < beta.size(); ++k) {
        s += beta[k] * row[k];
    }
    return s;
}

namespace {

double feature_value(const Dataset& data, std::size_t i, const std::pair<std::size_t, std::uint32_t>& f)
{
    if (f.second == 0) {
        return data.number(i, f.first);
    }
    return data.code(i, f.first) == f.second ? 1.0 : 0.0;
}

} // namespace

DesignLayout make_layout(const Dataset& data, std::span<const std::size_t> predictors,
                         std::span<const std::size_t> fit_rows)
{
    DesignLayout layout;
    layout.predictors.assign(predictors.begin(), predictors.end());
    auto consider = [&](std::pair<std::size_t, std::uint32_t> f) {
        if (fit_rows.empty()) {
            return;
        }
        const double first = feature_value(data, fit_rows.front(), f);
        for (auto i : fit_rows) {
            if (feature_value(data, i, f) != first) {
                layout.features.push_back(f);
                return;
            }
        }
    };
    for (auto j : predictors) {
        const auto& col = data.column_schema(j);
        if (col.is_categorical()) {
            // The reference level is the first one present in the fit rows, so
            // absent levels cannot make the dummies collinear with the intercept.
            std::vector<bool> present(col.levels() + 1, false);
            for (auto i : fit_rows) {
                present[data.code(i, j)] = true;
            }
            bool reference_seen = false;
            for (std::uint32_t level = 1; level <= col.levels(); ++level) {
                if (!present[level]) {
                    continue;
                }
                if (reference_seen) {
                    consider({j, level});
                }
                reference_seen = true;
            }
        } else {
            consider({j, 0});
        }
    }
    return layout;
}

DesignMatrix build_design(const Dataset& data, const DesignLayout& layout, std::span<const std::size_t> rows)
{
    DesignMatrix x;
    x.rows = rows.size();
    x.cols = layout.features.size() + 1;
    x.values.reserve(x.rows * x.cols);
    for (auto i : rows) {
        x.values.push_back(1.0);
        for (const auto& f : layout.features) {
            x.values.push_back(feature_value(data, i, f));
        }
    }
    return x;
}

NormModel fit_norm(const Dataset& data, std::size_t target, std::span<const std::size_t> predictors)
{
    if (data.column_schema(target).is_categorical()) {
        throw Error(ErrorCode::Unsupported, "linear regression needs a numeric target");
    }
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < data.rows(); ++i) {
        bool complete = !data.is_missing(i, target);
        for (auto j : predictors) {
            complete = complete && !data.is_missing(i, j);
        }
        if (complete) {
            rows.push_back(i);
        }
    }
    NormModel model;
    model.layout = make_layout(data, predictors, rows);
    const auto x = build_design(data, model.layout, rows);
    std::vector<double> y;
    y.reserve(rows.size());
    for (auto i : rows) {
        y.push_back(data.number(i, target));
    }
    model.fit = fit_ols(x, y);
    return model;
}

} // namespace impbench
