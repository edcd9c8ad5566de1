#include "impbench/cart.hpp"
#include "impbench/errors.hpp"
#include "impbench/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

using namespace impbench;

namespace {

std::vector<std::size_t> all_rows(std::size_t n)
{
    std::vector<std::size_t> r(n);
    std::iota(r.begin(), r.end(), std::size_t{0});
    return r;
}

} // namespace

TEST_CASE("regression tree isolates a step")
{
    FeatureMatrix x;
    x.rows = 40;
    x.columns = {std::vector<double>(40), std::vector<double>(40)};
    x.levels = {0, 0};
    std::vector<double> y(40);
    auto rng = make_rng(1);
    std::uniform_real_distribution<double> noise(0.0, 1.0);
    for (std::size_t i = 0; i < 40; ++i) {
        x.columns[0][i] = static_cast<double>(i);
        x.columns[1][i] = noise(rng);
        y[i] = i < 20 ? 0.0 : 10.0;
    }
    TreeOptions options;
    options.min_leaf = 5;
    const auto rows = all_rows(40);
    const auto tree = DecisionTree::fit_regression(x, y, rows, options);
    CHECK(tree.leaf_count() >= 2);
    // Leaves are pure with respect to the step.
    for (std::size_t leaf = 0; leaf < tree.leaf_count(); ++leaf) {
        const auto members = tree.leaf_members(leaf);
        REQUIRE(members.size() >= options.min_leaf);
        const double first = y[members.front()];
        CHECK(std::all_of(members.begin(), members.end(), [&](auto i) { return y[i] == first; }));
    }
    for (std::size_t i = 0; i < 40; ++i) {
        const auto members = tree.leaf_members(tree.leaf_of(x, i));
        CHECK(std::find(members.begin(), members.end(), i) != members.end());
    }
}

TEST_CASE("leaves partition the training rows")
{
    auto rng = make_rng(2);
    std::normal_distribution<double> normal(0.0, 1.0);
    FeatureMatrix x;
    x.rows = 300;
    x.columns = {std::vector<double>(300), std::vector<double>(300)};
    x.levels = {0, 4};
    std::uniform_int_distribution<int> level(1, 4);
    std::vector<double> y(300);
    for (std::size_t i = 0; i < 300; ++i) {
        x.columns[0][i] = normal(rng);
        x.columns[1][i] = level(rng);
        y[i] = x.columns[0][i] + (x.columns[1][i] == 3 ? 2.0 : 0.0) + 0.1 * normal(rng);
    }
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < 300; i += 2) {
        rows.push_back(i);
    }
    TreeOptions options;
    options.min_leaf = 7;
    const auto tree = DecisionTree::fit_regression(x, y, rows, options);
    std::multiset<std::size_t> seen;
    for (std::size_t leaf = 0; leaf < tree.leaf_count(); ++leaf) {
        CHECK(tree.leaf_members(leaf).size() >= options.min_leaf);
        seen.insert(tree.leaf_members(leaf).begin(), tree.leaf_members(leaf).end());
    }
    CHECK(seen == std::multiset<std::size_t>(rows.begin(), rows.end()));
    // Rows outside the training set still route to a leaf.
    CHECK(tree.leaf_of(x, 1) < tree.leaf_count());
}

TEST_CASE("classification tree separates categorical groups")
{
    FeatureMatrix x;
    x.rows = 60;
    x.columns = {std::vector<double>(60)};
    x.levels = {3};
    std::vector<std::uint32_t> y(60);
    for (std::size_t i = 0; i < 60; ++i) {
        const auto level = static_cast<std::uint32_t>(i % 3 + 1);
        x.columns[0][i] = level;
        y[i] = level == 2 ? 2 : 1;
    }
    TreeOptions options;
    options.min_leaf = 3;
    const auto tree = DecisionTree::fit_classification(x, y, 2, all_rows(60), options);
    CHECK(tree.leaf_count() == 2);
    for (std::size_t leaf = 0; leaf < tree.leaf_count(); ++leaf) {
        const auto members = tree.leaf_members(leaf);
        const auto first = y[members.front()];
        CHECK(std::all_of(members.begin(), members.end(), [&](auto i) { return y[i] == first; }));
    }
}

TEST_CASE("pure or tiny nodes stay leaves")
{
    FeatureMatrix x;
    x.rows = 10;
    x.columns = {std::vector<double>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}};
    x.levels = {0};
    const std::vector<double> flat(10, 4.0);
    CHECK(DecisionTree::fit_regression(x, flat, all_rows(10)).leaf_count() == 1);
    std::vector<double> step{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
    TreeOptions options;
    options.min_leaf = 6;
    CHECK(DecisionTree::fit_regression(x, step, all_rows(10), options).leaf_count() == 1);
    CHECK_THROWS_AS(DecisionTree::fit_regression(x, step, std::vector<std::size_t>{}), Error);
    const std::vector<std::uint32_t> bad(10, 3);
    CHECK_THROWS_AS(DecisionTree::fit_classification(x, bad, 2, all_rows(10)), Error);
}
