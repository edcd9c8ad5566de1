#include "impbench/errors.hpp"
#include "impbench/imputers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace impbench {

namespace {

struct Scale {
    double mean = 0.0;
    double sd = 1.0;
};

std::vector<Scale> observed_scales(const Dataset& data)
{
    std::vector<Scale> scales(data.cols());
    for (std::size_t j = 0; j < data.cols(); ++j) {
        if (data.column_schema(j).is_categorical()) {
            continue;
        }
        const auto v = data.observed_numbers(j);
        if (v.size() < 2) {
            continue;
        }
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) {
            ss += (x - mean) * (x - mean);
        }
        const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
        scales[j] = Scale{mean, sd > 0.0 ? sd : 1.0};
    }
    return scales;
}

// Infinity when the rows share no observed dimension.
double distance(const Dataset& data, const std::vector<Scale>& scales, std::size_t a, std::size_t b)
{
    double sumsq = 0.0;
    std::size_t mutual = 0;
    for (std::size_t j = 0; j < data.cols(); ++j) {
        if (data.is_missing(a, j) || data.is_missing(b, j)) {
            continue;
        }
        ++mutual;
        if (data.column_schema(j).is_categorical()) {
            sumsq += data.code(a, j) == data.code(b, j) ? 0.0 : 1.0;
        } else {
            const double d = (data.number(a, j) - data.number(b, j)) / scales[j].sd;
            sumsq += d * d;
        }
    }
    if (mutual == 0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::sqrt(sumsq * static_cast<double>(data.cols()) / static_cast<double>(mutual));
}

} // namespace

Dataset impute_knn(const Dataset& incomplete, const KnnOptions& options)
{
    if (options.k == 0) {
        throw Error(ErrorCode::Config, "knn needs k >= 1");
    }
    const auto n = incomplete.rows();
    const auto p = incomplete.cols();
    const auto scales = observed_scales(incomplete);
    auto cols = incomplete.columns();

    std::vector<double> dist(n);
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < n; ++i) {
        bool any_missing = false;
        for (std::size_t j = 0; j < p && !any_missing; ++j) {
            any_missing = incomplete.is_missing(i, j);
        }
        if (!any_missing) {
            continue;
        }
        for (std::size_t r = 0; r < n; ++r) {
            dist[r] = r == i ? std::numeric_limits<double>::infinity() : distance(incomplete, scales, i, r);
        }
        for (std::size_t j = 0; j < p; ++j) {
            if (!incomplete.is_missing(i, j)) {
                continue;
            }
            order.clear();
            for (std::size_t r = 0; r < n; ++r) {
                if (std::isfinite(dist[r]) && !incomplete.is_missing(r, j)) {
                    order.push_back(r);
                }
            }
            if (order.empty()) {
                throw Error(ErrorCode::NoDonor, "row " + std::to_string(i) + " has no donor for column '"
                                                    + incomplete.column_schema(j).name + "'");
            }
            const auto k = std::min(options.k, order.size());
            std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                              [&](std::size_t a, std::size_t b) {
                                  return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
                              });
            if (incomplete.column_schema(j).is_categorical()) {
                std::vector<std::size_t> votes(incomplete.column_schema(j).levels() + 1, 0);
                for (std::size_t t = 0; t < k; ++t) {
                    ++votes[incomplete.code(order[t], j)];
                }
                const auto best = std::max_element(votes.begin() + 1, votes.end());
                cols[j][i] = Category{static_cast<std::uint32_t>(std::distance(votes.begin(), best))};
            } else {
                double sum = 0.0;
                for (std::size_t t = 0; t < k; ++t) {
                    sum += incomplete.number(order[t], j);
                }
                cols[j][i] = sum / static_cast<double>(k);
            }
        }
    }
    return Dataset(incomplete.schema(), std::move(cols));
}

} // namespace impbench
