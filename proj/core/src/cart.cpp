#include "impbench/cart.hpp"

#include "impbench/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace impbench {

namespace {

struct RegressionCriterion {
    std::span<const double> y;

    struct Acc {
        double n = 0.0;
        double sum = 0.0;
        double sumsq = 0.0;
    };

    Acc empty() const { return {}; }
    void add(Acc& a, std::size_t row) const
    {
        const double v = y[row];
        a.n += 1.0;
        a.sum += v;
        a.sumsq += v * v;
    }
    void remove(Acc& a, std::size_t row) const
    {
        const double v = y[row];
        a.n -= 1.0;
        a.sum -= v;
        a.sumsq -= v * v;
    }
    double impurity(const Acc& a) const
    {
        return a.n > 0.0 ? std::max(0.0, a.sumsq - a.sum * a.sum / a.n) : 0.0;
    }
    // Ordering key for a level of a categorical feature.
    double level_key(std::span<const std::size_t> members, const Acc&) const
    {
        double s = 0.0;
        for (auto r : members) {
            s += y[r];
        }
        return s / static_cast<double>(members.size());
    }
};

struct GiniCriterion {
    std::span<const std::uint32_t> y;
    std::uint32_t classes;

    struct Acc {
        double n = 0.0;
        std::vector<double> counts;
    };

    Acc empty() const { return {0.0, std::vector<double>(classes + 1, 0.0)}; }
    void add(Acc& a, std::size_t row) const
    {
        a.n += 1.0;
        a.counts[y[row]] += 1.0;
    }
    void remove(Acc& a, std::size_t row) const
    {
        a.n -= 1.0;
        a.counts[y[row]] -= 1.0;
    }
    double impurity(const Acc& a) const
    {
        if (a.n <= 0.0) {
            return 0.0;
        }
        double sq = 0.0;
        for (double c : a.counts) {
            sq += c * c;
        }
        return std::max(0.0, a.n - sq / a.n);
    }
    // Share of the node's majority class within the level.
    double level_key(std::span<const std::size_t> members, const Acc& node) const
    {
        const auto majority = static_cast<std::uint32_t>(
            std::distance(node.counts.begin(), std::max_element(node.counts.begin(), node.counts.end())));
        double hits = 0.0;
        for (auto r : members) {
            hits += y[r] == majority ? 1.0 : 0.0;
        }
        return hits / static_cast<double>(members.size());
    }
};

struct SplitCandidate {
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
    std::vector<bool> goes_left;
};

} // namespace

template <typename Criterion>
DecisionTree DecisionTree::grow(const FeatureMatrix& x, const Criterion& crit, std::span<const std::size_t> rows,
                                const TreeOptions& options)
{
    if (rows.empty()) {
        throw Error(ErrorCode::InsufficientData, "cannot grow a tree on zero rows");
    }
    const auto min_leaf = std::max<std::size_t>(1, options.min_leaf);
    const auto min_split = options.min_split ? options.min_split : 3 * min_leaf;

    DecisionTree tree;
    struct Pending {
        int node;
        std::vector<std::size_t> rows;
    };
    std::vector<Pending> stack;
    tree.nodes_.push_back({});
    stack.push_back({0, std::vector<std::size_t>(rows.begin(), rows.end())});

    double root_impurity = -1.0;
    while (!stack.empty()) {
        auto job = std::move(stack.back());
        stack.pop_back();
        auto& members = job.rows;

        auto node_acc = crit.empty();
        for (auto r : members) {
            crit.add(node_acc, r);
        }
        const double parent = crit.impurity(node_acc);
        if (root_impurity < 0.0) {
            root_impurity = parent;
        }

        SplitCandidate best;
        const double min_gain = std::max(options.cp * root_impurity, 1e-12 * std::max(1.0, root_impurity));
        if (members.size() >= min_split && parent > 0.0) {
            std::vector<std::size_t> order(members.size());
            std::vector<double> key(x.rows);
            for (std::size_t f = 0; f < x.cols(); ++f) {
                const auto& col = x.columns[f];
                std::vector<bool> level_left;
                std::vector<double> level_rank;
                if (x.levels[f] == 0) {
                    for (auto r : members) {
                        key[r] = col[r];
                    }
                } else {
                    // Order levels by the criterion's key, then split like a numeric feature.
                    const auto levels = x.levels[f];
                    std::vector<std::vector<std::size_t>> by_level(levels + 1);
                    for (auto r : members) {
                        by_level[static_cast<std::size_t>(col[r])].push_back(r);
                    }
                    level_rank.assign(levels + 1, std::numeric_limits<double>::infinity());
                    std::vector<std::pair<double, std::uint32_t>> keyed;
                    for (std::uint32_t l = 1; l <= levels; ++l) {
                        if (!by_level[l].empty()) {
                            keyed.emplace_back(crit.level_key(by_level[l], node_acc), l);
                        }
                    }
                    std::stable_sort(keyed.begin(), keyed.end());
                    for (std::size_t t = 0; t < keyed.size(); ++t) {
                        level_rank[keyed[t].second] = static_cast<double>(t);
                    }
                    for (auto r : members) {
                        key[r] = level_rank[static_cast<std::size_t>(col[r])];
                    }
                }
                std::copy(members.begin(), members.end(), order.begin());
                std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return key[a] < key[b]; });

                auto left = crit.empty();
                auto right = node_acc;
                for (std::size_t t = 0; t + 1 < order.size(); ++t) {
                    crit.add(left, order[t]);
                    crit.remove(right, order[t]);
                    const auto nl = t + 1;
                    if (nl < min_leaf) {
                        continue;
                    }
                    if (order.size() - nl < min_leaf) {
                        break;
                    }
                    if (key[order[t]] == key[order[t + 1]]) {
                        continue;
                    }
                    const double gain = parent - crit.impurity(left) - crit.impurity(right);
                    if (gain > best.gain) {
                        best.gain = gain;
                        best.feature = static_cast<int>(f);
                        best.threshold = 0.5 * (key[order[t]] + key[order[t + 1]]);
                        if (x.levels[f] != 0) {
                            best.goes_left.assign(x.levels[f] + 1, false);
                            for (std::uint32_t l = 1; l <= x.levels[f]; ++l) {
                                best.goes_left[l] = level_rank[l] <= best.threshold;
                            }
                        } else {
                            best.goes_left.clear();
                        }
                    }
                }
            }
        }

        if (best.feature < 0 || best.gain <= min_gain) {
            tree.nodes_[static_cast<std::size_t>(job.node)].leaf = tree.leaves_.size();
            tree.leaves_.push_back(std::move(members));
            continue;
        }

        const auto f = static_cast<std::size_t>(best.feature);
        std::vector<std::size_t> left_rows;
        std::vector<std::size_t> right_rows;
        for (auto r : members) {
            const double v = x.columns[f][r];
            const bool left = x.levels[f] == 0 ? v <= best.threshold : best.goes_left[static_cast<std::size_t>(v)];
            (left ? left_rows : right_rows).push_back(r);
        }
        const int left_id = static_cast<int>(tree.nodes_.size());
        tree.nodes_.push_back({});
        const int right_id = static_cast<int>(tree.nodes_.size());
        tree.nodes_.push_back({});
        auto& node = tree.nodes_[static_cast<std::size_t>(job.node)];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.goes_left = std::move(best.goes_left);
        node.left = left_id;
        node.right = right_id;
        stack.push_back({right_id, std::move(right_rows)});
        stack.push_back({left_id, std::move(left_rows)});
    }
    return tree;
}

DecisionTree DecisionTree::fit_regression(const FeatureMatrix& x, std::span<const double> y,
                                          std::span<const std::size_t> rows, const TreeOptions& options)
{
    return grow(x, RegressionCriterion{y}, rows, options);
}

DecisionTree DecisionTree::fit_classification(const FeatureMatrix& x, std::span<const std::uint32_t> y,
                                              std::uint32_t classes, std::span<const std::size_t> rows,
                                              const TreeOptions& options)
{
    for (auto r : rows) {
        if (y[r] == 0 || y[r] > classes) {
            throw Error(ErrorCode::Computational, "class code out of range in tree response");
        }
    }
    return grow(x, GiniCriterion{y, classes}, rows, options);
}

std::size_t DecisionTree::leaf_of(const FeatureMatrix& x, std::size_t row) const
{
    std::size_t id = 0;
    while (nodes_[id].feature >= 0) {
        const auto& node = nodes_[id];
        const auto f = static_cast<std::size_t>(node.feature);
        const double v = x.columns[f][row];
        bool left = false;
        if (x.levels[f] == 0) {
            left = v <= node.threshold;
        } else {
            // Levels absent from the node at fit time go right.
            const auto level = static_cast<std::size_t>(v);
            left = level < node.goes_left.size() && node.goes_left[level];
        }
        id = static_cast<std::size_t>(left ? node.left : node.right);
    }
    return nodes_[id].leaf;
}

} // namespace impbench
