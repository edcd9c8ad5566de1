#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace impbench {

// Column-major features. levels[f] == 0 marks a numeric feature; otherwise the
// feature holds category codes 1..levels[f] stored as doubles.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::vector<std::vector<double>> columns;
    std::vector<std::uint32_t> levels;

    [[nodiscard]] std::size_t cols() const noexcept { return columns.size(); }
};

struct TreeOptions {
    std::size_t min_leaf = 5;
    // Minimum node size to attempt a split; 0 means 3 * min_leaf.
    std::size_t min_split = 0;
    // A split must reduce impurity by more than cp times the root impurity.
    double cp = 1e-4;
};

// Unpruned CART: variance-reduction splits for a numeric response, Gini for a
// categorical one. Leaves keep the training rows that reached them so callers
// can draw donors.
class DecisionTree {
public:
    static DecisionTree fit_regression(const FeatureMatrix& x, std::span<const double> y,
                                       std::span<const std::size_t> rows, const TreeOptions& options = {});
    static DecisionTree fit_classification(const FeatureMatrix& x, std::span<const std::uint32_t> y,
                                           std::uint32_t classes, std::span<const std::size_t> rows,
                                           const TreeOptions& options = {});

    [[nodiscard]] std::size_t leaf_of(const FeatureMatrix& x, std::size_t row) const;
    [[nodiscard]] std::span<const std::size_t> leaf_members(std::size_t leaf) const { return leaves_.at(leaf); }
    [[nodiscard]] std::size_t leaf_count() const noexcept { return leaves_.size(); }
    [[nodiscard]] std::size_t node_count() const noexcept { return nodes_.size(); }

private:
    struct Node {
        int feature = -1;
        double threshold = 0.0;
        std::vector<bool> goes_left;
        int left = -1;
        int right = -1;
        std::size_t leaf = 0;
    };

    template <typename Criterion>
    static DecisionTree grow(const FeatureMatrix& x, const Criterion& crit, std::span<const std::size_t> rows,
                             const TreeOptions& options);

    std::vector<Node> nodes_;
    std::vector<std::vector<std::size_t>> leaves_;
};

} // namespace impbench
