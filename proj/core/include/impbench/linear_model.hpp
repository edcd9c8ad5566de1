#pragma once

#include "impbench/dataset.hpp"
#include "impbench/random.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace impbench {

// Row-major design matrix; callers include the intercept column explicitly.
struct DesignMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    [[nodiscard]] std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
};

struct LinearFit {
    std::vector<double> beta;
    double rss = 0.0;
    double residual_sd = 0.0;
    std::size_t n = 0;
    // Lower Cholesky factor of (X'X)^-1, row-major q x q.
    std::vector<double> unscaled_cov_chol;

    [[nodiscard]] std::size_t df() const noexcept { return n - beta.size(); }
};

// Ordinary least squares. Requires n >= q + 1 rows; collinear designs raise
// RankDeficient.
LinearFit fit_ols(const DesignMatrix& x, std::span<const double> y);

struct CoefficientDraw {
    std::vector<double> beta;
    double sigma = 0.0;
};

// Posterior draw used by Bayesian linear-regression imputation:
// sigma* = sqrt(rss / g) with g ~ chi2(n - q), beta* = beta + sigma* L z.
CoefficientDraw draw_coefficients(const LinearFit& fit, Rng& rng);

double predict(std::span<const double> beta, std::span<const double> row) noexcept;

// Design over `predictors` of `data` for the given rows: intercept, numeric
// columns as-is, categorical columns as treatment dummies against the first
// level present in `fit_rows`.
// Dummies or numeric columns that are constant on `fit_rows` are dropped;
// `kept` records which expanded features survived so prediction rows use the
// same layout.
struct DesignLayout {
    std::vector<std::size_t> predictors;
    // (column, level) pairs; level 0 means numeric.
    std::vector<std::pair<std::size_t, std::uint32_t>> features;
};

DesignLayout make_layout(const Dataset& data, std::span<const std::size_t> predictors,
                         std::span<const std::size_t> fit_rows);
DesignMatrix build_design(const Dataset& data, const DesignLayout& layout, std::span<const std::size_t> rows);

enum class NormVariant { Bayesian, NoBayes, Predict };

struct NormModel {
    DesignLayout layout;
    LinearFit fit;
};

// Fits the target column on predictors using rows where target and every
// predictor are observed.
NormModel fit_norm(const Dataset& data, std::size_t target, std::span<const std::size_t> predictors);

} // namespace impbench
