#include "impbench/errors.hpp"
#include "impbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace impbench {

namespace {

double block_sum(const EncodedMatrix& a, const EncodedMatrix& b, std::size_t first, std::size_t last)
{
    const auto d = a.dims();
    double total = 0.0;
    for (std::size_t i = first; i < last; ++i) {
        const auto ai = a.row(i);
        double row_total = 0.0;
        for (std::size_t j = 0; j < b.rows(); ++j) {
            const auto bj = b.row(j);
            double ss = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                const double diff = ai[k] - bj[k];
                ss += diff * diff;
            }
            row_total += std::sqrt(ss);
        }
        total += row_total;
    }
    return total;
}

} // namespace

double pairwise_distance_sum(const EncodedMatrix& a, const EncodedMatrix& b, const EnergyOptions& options)
{
    if (a.dims() != b.dims()) {
        throw Error(ErrorCode::ColumnMismatch, "encoded widths differ: " + std::to_string(a.dims()) + " vs "
                                                   + std::to_string(b.dims()));
    }
    const auto block = std::max<std::size_t>(options.block_rows, 1);
    const auto blocks = (a.rows() + block - 1) / block;
    std::vector<double> partial(blocks, 0.0);
    auto work = [&](std::size_t first_block, std::size_t stride) {
        for (std::size_t t = first_block; t < blocks; t += stride) {
            partial[t] = block_sum(a, b, t * block, std::min(a.rows(), (t + 1) * block));
        }
    };
    const auto threads = std::min(std::max<std::size_t>(options.threads, 1), std::max<std::size_t>(blocks, 1));
    if (threads <= 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < threads; ++w) {
            pool.emplace_back(work, w, threads);
        }
    }
    double total = 0.0;
    for (double s : partial) {
        total += s;
    }
    return total;
}

double energy_distance_value(const EncodedMatrix& x, const EncodedMatrix& y, const EnergyOptions& options)
{
    if (x.dims() != y.dims() || x.rows() != y.rows()) {
        throw Error(ErrorCode::ColumnMismatch, "energy distance needs equally shaped samples");
    }
    if (x.rows() == 0) {
        throw Error(ErrorCode::EmptyInput, "energy distance of empty samples");
    }
    // A canonical argument order makes the result independent of the call order.
    const bool swap = std::lexicographical_compare(y.values().begin(), y.values().end(), x.values().begin(),
                                                   x.values().end());
    const auto& a = swap ? y : x;
    const auto& b = swap ? x : y;
    const double cross = pairwise_distance_sum(a, b, options);
    const double within_a = pairwise_distance_sum(a, a, options);
    const double within_b = pairwise_distance_sum(b, b, options);
    const double n = static_cast<double>(x.rows());
    return (2.0 * cross - (within_a + within_b)) / (n * n);
}

Score energy_distance(const EncodedMatrix& x, const EncodedMatrix& y, const EnergyOptions& options)
{
    return make_score(Metric::EnergyDistance, energy_distance_value(x, y, options));
}

} // namespace impbench
