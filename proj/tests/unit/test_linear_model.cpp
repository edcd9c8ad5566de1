#include "impbench/errors.hpp"
#include "impbench/linear_model.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace impbench;

namespace {

DesignMatrix with_intercept(const std::vector<double>& x)
{
    DesignMatrix d;
    d.rows = x.size();
    d.cols = 2;
    for (double v : x) {
        d.values.push_back(1.0);
        d.values.push_back(v);
    }
    return d;
}

} // namespace

TEST_CASE("OLS matches the closed-form simple regression")
{
    auto rng = make_rng(3);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> x(200), y(200);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = normal(rng);
        y[i] = 2.0 - 0.5 * x[i] + 0.3 * normal(rng);
    }
    const auto fit = fit_ols(with_intercept(x), y);
    const auto ref = oracle::simple_regression(x, y);
    CHECK(fit.beta[1] == doctest::Approx(ref.slope).epsilon(1e-10));
    CHECK(fit.df() == 198);
    // se(slope) = s * sqrt([(X'X)^-1]_11), and L L' = (X'X)^-1.
    const double l10 = fit.unscaled_cov_chol[2];
    const double l11 = fit.unscaled_cov_chol[3];
    CHECK(fit.residual_sd * std::sqrt(l10 * l10 + l11 * l11) == doctest::Approx(ref.se).epsilon(1e-9));
    CHECK(fit.unscaled_cov_chol[1] == 0.0);
}

TEST_CASE("OLS recovers an exact linear relation")
{
    const std::vector<double> x{0, 1, 2, 3, 4};
    const std::vector<double> y{1, 4, 7, 10, 13};
    const auto fit = fit_ols(with_intercept(x), y);
    CHECK(fit.beta[0] == doctest::Approx(1.0));
    CHECK(fit.beta[1] == doctest::Approx(3.0));
    CHECK(fit.rss == doctest::Approx(0.0).epsilon(1e-20));
    const std::vector<double> row{1.0, 10.0};
    CHECK(predict(fit.beta, row) == doctest::Approx(31.0));
}

TEST_CASE("OLS error cases")
{
    const std::vector<double> y{1, 2, 3};
    const std::vector<double> x{5, 5, 5};
    try {
        (void)fit_ols(with_intercept(x), y);
        FAIL("expected rank deficiency");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::RankDeficient);
    }
    try {
        (void)fit_ols(with_intercept({1, 2}), std::vector<double>{1, 2});
        FAIL("expected too few rows");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientData);
    }
    CHECK_THROWS_AS((void)fit_ols(with_intercept({1, 2, 3}), std::vector<double>{1, 2}), Error);
}

TEST_CASE("posterior coefficient draws are centred on the estimate")
{
    auto rng = make_rng(8);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> x(60), y(60);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = normal(rng);
        y[i] = 1.0 + x[i] + normal(rng);
    }
    const auto fit = fit_ols(with_intercept(x), y);
    const int draws = 20000;
    double slope_sum = 0.0;
    double slope_ss = 0.0;
    double sigma2_sum = 0.0;
    for (int t = 0; t < draws; ++t) {
        const auto d = draw_coefficients(fit, rng);
        slope_sum += d.beta[1];
        slope_ss += (d.beta[1] - fit.beta[1]) * (d.beta[1] - fit.beta[1]);
        sigma2_sum += d.sigma * d.sigma;
    }
    const double df = static_cast<double>(fit.df());
    const double l10 = fit.unscaled_cov_chol[2];
    const double l11 = fit.unscaled_cov_chol[3];
    const double unscaled_var = l10 * l10 + l11 * l11;
    // E[sigma*^2] = rss / (df - 2); Var(beta*) = E[sigma*^2] (X'X)^-1.
    const double expected_sigma2 = fit.rss / (df - 2.0);
    CHECK(sigma2_sum / draws == doctest::Approx(expected_sigma2).epsilon(0.02));
    CHECK(slope_sum / draws == doctest::Approx(fit.beta[1]).epsilon(0.01));
    CHECK(slope_ss / draws == doctest::Approx(expected_sigma2 * unscaled_var).epsilon(0.05));
}

TEST_CASE("design layout drops constants and absent levels")
{
    Schema schema{ColumnSchema::numeric("y"), ColumnSchema::numeric("flat"),
                  ColumnSchema::categorical("c", {"a", "b", "c", "d"}), ColumnSchema::numeric("x")};
    const Dataset d(schema, {{1.0, 2.0, 3.0, 4.0, 5.0, 6.0},
                             {7.0, 7.0, 7.0, 7.0, 7.0, 7.0},
                             {Category{2}, Category{3}, Category{2}, Category{3}, Category{2}, Category{1}},
                             {0.5, 1.5, 0.1, 2.0, 3.0, 1.0}});
    const std::vector<std::size_t> predictors{1, 2, 3};
    const std::vector<std::size_t> rows{0, 1, 2, 3, 4};
    const auto layout = make_layout(d, predictors, rows);
    // Level b is the reference on these rows and a, d are absent.
    using F = std::pair<std::size_t, std::uint32_t>;
    CHECK(layout.features == std::vector<F>{{2, 3}, {3, 0}});
    const auto x = build_design(d, layout, std::vector<std::size_t>{1, 5});
    CHECK(x.cols == 3);
    CHECK(x.values == std::vector<double>{1.0, 1.0, 1.5, 1.0, 0.0, 1.0});
}

TEST_CASE("norm model uses complete rows only")
{
    Schema schema{ColumnSchema::numeric("y"), ColumnSchema::numeric("x")};
    const Dataset d(schema, {{1.0, 3.0, Missing{}, 7.0, 9.0, 100.0},
                             {0.0, 1.0, 2.0, 3.0, 4.0, Missing{}}});
    const std::vector<std::size_t> predictors{1};
    const auto model = fit_norm(d, 0, predictors);
    CHECK(model.fit.n == 4);
    CHECK(model.fit.beta[0] == doctest::Approx(1.0));
    CHECK(model.fit.beta[1] == doctest::Approx(2.0));

    Schema cat{ColumnSchema::categorical("y", {"a", "b"}), ColumnSchema::numeric("x")};
    const Dataset c(cat, {{Category{1}, Category{2}, Category{1}}, {1.0, 2.0, 3.0}});
    CHECK_THROWS_AS((void)fit_norm(c, 0, predictors), Error);
}
