#include "impbench/amputation.hpp"

#include "impbench/errors.hpp"
#include "impbench/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace impbench {

std::string_view to_string(Mechanism m) noexcept
{
    return m == Mechanism::MCAR ? "MCAR" : "MAR";
}

Mechanism parse_mechanism(std::string_view s)
{
    if (s == "MCAR" || s == "mcar") {
        return Mechanism::MCAR;
    }
    if (s == "MAR" || s == "mar") {
        return Mechanism::MAR;
    }
    throw Error(ErrorCode::Config, "unknown mechanism '" + std::string(s) + "' (MNAR is not supported)");
}

AmputationPlan AmputationPlan::make_default(std::size_t cols, Mechanism mechanism, double proportion, std::uint64_t seed)
{
    if (cols < 2) {
        throw Error(ErrorCode::InvalidPlan, "amputation needs at least two columns");
    }
    std::size_t width = 1;
    while (width + 1 < cols
           && proportion * static_cast<double>(cols) / static_cast<double>(width) > kMaxDefaultRowFraction) {
        ++width;
    }
    AmputationPlan plan;
    plan.mechanism = mechanism;
    plan.proportion = proportion;
    plan.seed = seed;
    for (std::size_t k = 0; k < cols; ++k) {
        std::vector<bool> pattern(cols, false);
        std::vector<double> w(cols, 1.0);
        for (std::size_t t = 0; t < width; ++t) {
            pattern[(k + t) % cols] = true;
            w[(k + t) % cols] = 0.0;
        }
        plan.patterns.push_back(std::move(pattern));
        plan.weights.push_back(std::move(w));
        plan.pattern_freq.push_back(1.0 / static_cast<double>(cols));
    }
    return plan;
}

void AmputationPlan::validate(std::size_t cols) const
{
    if (!(proportion >= 0.0 && proportion < 1.0)) {
        throw Error(ErrorCode::InvalidPlan, "proportion must lie in [0, 1)");
    }
    if (patterns.empty()) {
        throw Error(ErrorCode::InvalidPlan, "plan has zero patterns");
    }
    if (pattern_freq.size() != patterns.size() || weights.size() != patterns.size()) {
        throw Error(ErrorCode::InvalidPlan, "patterns, frequencies and weights differ in length");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < patterns.size(); ++k) {
        if (patterns[k].size() != cols || weights[k].size() != cols) {
            throw Error(ErrorCode::InvalidPlan, "pattern " + std::to_string(k) + " has the wrong width");
        }
        const auto amputated = std::count(patterns[k].begin(), patterns[k].end(), true);
        if (amputated == 0 || static_cast<std::size_t>(amputated) == cols) {
            throw Error(ErrorCode::InvalidPlan,
                        "pattern " + std::to_string(k) + " must amputate at least one and observe at least one column");
        }
        if (!(pattern_freq[k] >= 0.0)) {
            throw Error(ErrorCode::InvalidPlan, "negative pattern frequency");
        }
        total += pattern_freq[k];
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw Error(ErrorCode::InvalidPlan, "pattern frequencies must sum to 1");
    }
}

namespace {

// Columns standardized with complete-data moments; category codes are
// treated as numbers for scoring purposes.
std::vector<std::vector<double>> standardized_columns(const Dataset& complete)
{
    std::vector<std::vector<double>> z(complete.cols(), std::vector<double>(complete.rows()));
    const auto n = complete.rows();
    for (std::size_t j = 0; j < complete.cols(); ++j) {
        const bool categorical = complete.column_schema(j).is_categorical();
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            z[j][i] = categorical ? static_cast<double>(complete.code(i, j)) : complete.number(i, j);
            sum += z[j][i];
        }
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (double v : z[j]) {
            ss += (v - mean) * (v - mean);
        }
        const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
        for (auto& v : z[j]) {
            v = sd > 0.0 ? (v - mean) / sd : 0.0;
        }
    }
    return z;
}

double logistic(double x)
{
    return 1.0 / (1.0 + std::exp(-x));
}

// Largest-remainder apportionment of `total` into integer shares.
std::vector<std::size_t> apportion(std::size_t total, std::span<const double> freq)
{
    std::vector<std::size_t> out(freq.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t k = 0; k < freq.size(); ++k) {
        const double exact = static_cast<double>(total) * freq[k];
        out[k] = static_cast<std::size_t>(std::floor(exact));
        assigned += out[k];
        remainders.emplace_back(exact - std::floor(exact), k);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t t = 0; assigned < total && t < remainders.size(); ++t, ++assigned) {
        ++out[remainders[t].second];
    }
    return out;
}

void amputate_mcar(Mask& mask, double proportion, Rng& rng)
{
    std::bernoulli_distribution coin(proportion);
    for (std::size_t i = 0; i < mask.rows(); ++i) {
        for (std::size_t j = 0; j < mask.cols(); ++j) {
            mask.set(i, j, coin(rng));
        }
    }
}

void amputate_mar(Mask& mask, const Dataset& complete, const AmputationPlan& plan, Rng& rng)
{
    const auto n = complete.rows();
    const auto p = complete.cols();
    const auto z = standardized_columns(complete);
    const auto target_cells = static_cast<std::size_t>(std::llround(plan.proportion * static_cast<double>(n * p)));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    const auto group_sizes = apportion(n, plan.pattern_freq);

    std::size_t offset = 0;
    for (std::size_t k = 0; k < plan.patterns.size(); ++k) {
        const auto& pattern = plan.patterns[k];
        const auto width = static_cast<std::size_t>(std::count(pattern.begin(), pattern.end(), true));
        std::vector<std::size_t> rows(order.begin() + static_cast<std::ptrdiff_t>(offset),
                                      order.begin() + static_cast<std::ptrdiff_t>(offset + group_sizes[k]));
        offset += group_sizes[k];
        const auto want = static_cast<std::size_t>(
            std::llround(static_cast<double>(target_cells) * plan.pattern_freq[k] / static_cast<double>(width)));
        if (want == 0) {
            continue;
        }
        if (want > rows.size()) {
            throw Error(ErrorCode::InfeasiblePlan, "pattern " + std::to_string(k) + " needs " + std::to_string(want)
                                                       + " rows but only " + std::to_string(rows.size())
                                                       + " are assigned to it");
        }

        std::vector<double> score(rows.size(), 0.0);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            for (std::size_t j = 0; j < p; ++j) {
                if (!pattern[j]) {
                    score[r] += plan.weights[k][j] * z[j][rows[r]];
                }
            }
        }
        const double mean = std::accumulate(score.begin(), score.end(), 0.0) / static_cast<double>(score.size());
        double ss = 0.0;
        for (double s : score) {
            ss += (s - mean) * (s - mean);
        }
        const double sd = score.size() > 1 ? std::sqrt(ss / static_cast<double>(score.size() - 1)) : 0.0;
        for (auto& s : score) {
            s = sd > 0.0 ? (s - mean) / sd : 0.0;
        }

        // Right-tailed logistic, shifted so the mean masking probability
        // matches the pattern's row fraction.
        const double fraction = static_cast<double>(want) / static_cast<double>(rows.size());
        double lo = -60.0;
        double hi = 60.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            double m = 0.0;
            for (double s : score) {
                m += logistic(s + mid);
            }
            m /= static_cast<double>(score.size());
            (m < fraction ? lo : hi) = mid;
        }
        const double shift = 0.5 * (lo + hi);

        // Weighted sampling without replacement (Efraimidis-Spirakis keys)
        // of exactly `want` rows, so realized proportions do not wander.
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<std::pair<double, std::size_t>> keys;
        keys.reserve(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const double w = logistic(score[r] + shift);
            double u = unif(rng);
            while (u <= 0.0) {
                u = unif(rng);
            }
            const double key = w > 0.0 ? std::log(u) / w : -std::numeric_limits<double>::infinity();
            keys.emplace_back(key, rows[r]);
        }
        std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(want), keys.end(),
                          [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
        for (std::size_t t = 0; t < want; ++t) {
            for (std::size_t j = 0; j < p; ++j) {
                if (pattern[j]) {
                    mask.set(keys[t].second, j, true);
                }
            }
        }
    }
}

std::size_t observed_in_row(const Mask& mask, std::size_t i)
{
    std::size_t c = 0;
    for (std::size_t j = 0; j < mask.cols(); ++j) {
        c += mask(i, j) ? 0 : 1;
    }
    return c;
}

template <typename T>
const T& pick(const std::vector<T>& v, Rng& rng)
{
    std::uniform_int_distribution<std::size_t> d(0, v.size() - 1);
    return v[d(rng)];
}

// Every row keeps at least one observed cell; a masked cell moves to another
// row of the same column so the total count is unchanged.
void repair_empty_rows(Mask& mask, Rng& rng)
{
    const auto p = mask.cols();
    for (std::size_t i = 0; i < mask.rows(); ++i) {
        if (observed_in_row(mask, i) > 0) {
            continue;
        }
        std::uniform_int_distribution<std::size_t> col(0, p - 1);
        const auto j = col(rng);
        mask.set(i, j, false);
        std::vector<std::size_t> eligible;
        for (std::size_t r = 0; r < mask.rows(); ++r) {
            if (r != i && !mask(r, j) && observed_in_row(mask, r) >= 2) {
                eligible.push_back(r);
            }
        }
        if (!eligible.empty()) {
            mask.set(pick(eligible, rng), j, true);
        }
    }
}

void repair_categories(Mask& mask, const Dataset& complete, Rng& rng)
{
    for (std::size_t j = 0; j < complete.cols(); ++j) {
        const auto& schema = complete.column_schema(j);
        if (!schema.is_categorical()) {
            continue;
        }
        const auto levels = schema.levels();
        std::vector<std::size_t> present(levels + 1, 0);
        std::vector<std::size_t> observed(levels + 1, 0);
        for (std::size_t i = 0; i < complete.rows(); ++i) {
            const auto c = complete.code(i, j);
            ++present[c];
            if (!mask(i, j)) {
                ++observed[c];
            }
        }
        for (std::uint32_t level = 1; level <= levels; ++level) {
            if (present[level] == 0 || observed[level] > 0) {
                continue;
            }
            std::vector<std::size_t> restore;
            for (std::size_t i = 0; i < complete.rows(); ++i) {
                if (mask(i, j) && complete.code(i, j) == level) {
                    restore.push_back(i);
                }
            }
            const auto unmasked = pick(restore, rng);
            mask.set(unmasked, j, false);
            ++observed[level];

            std::vector<std::size_t> eligible;
            for (std::size_t i = 0; i < complete.rows(); ++i) {
                if (i != unmasked && !mask(i, j) && observed[complete.code(i, j)] >= 2 && observed_in_row(mask, i) >= 2) {
                    eligible.push_back(i);
                }
            }
            if (eligible.empty()) {
                throw Error(ErrorCode::InfeasiblePlan, "cannot preserve every level of column '" + schema.name
                                                           + "' at proportion this high");
            }
            const auto moved = pick(eligible, rng);
            mask.set(moved, j, true);
            --observed[complete.code(moved, j)];
        }
    }
}

} // namespace

MaskReplicate amputate(const Dataset& complete, const AmputationPlan& plan, int replicate_id)
{
    plan.validate(complete.cols());
    if (complete.has_missing()) {
        throw Error(ErrorCode::MissingCells, "amputation needs a complete dataset");
    }
    MaskReplicate out{replicate_id, Mask(complete.rows(), complete.cols())};
    if (plan.proportion == 0.0) {
        return out;
    }
    auto rng = make_rng(mix_seed(plan.seed, static_cast<std::uint64_t>(replicate_id) + 1));
    if (plan.mechanism == Mechanism::MCAR) {
        amputate_mcar(out.mask, plan.proportion, rng);
        repair_empty_rows(out.mask, rng);
    } else {
        amputate_mar(out.mask, complete, plan, rng);
    }
    repair_categories(out.mask, complete, rng);
    return out;
}

std::string plan_to_json(const AmputationPlan& plan)
{
    nlohmann::json doc;
    doc["mechanism"] = std::string(to_string(plan.mechanism));
    doc["proportion"] = plan.proportion;
    doc["patterns"] = nlohmann::json::array();
    for (const auto& pattern : plan.patterns) {
        std::vector<int> bits;
        for (bool b : pattern) {
            bits.push_back(b ? 1 : 0);
        }
        doc["patterns"].push_back(bits);
    }
    doc["pattern_freq"] = plan.pattern_freq;
    doc["weights"] = plan.weights;
    doc["seed"] = plan.seed;
    doc["shift"] = "RIGHT";
    return doc.dump();
}

AmputationPlan plan_from_json(std::string_view json_text)
{
    try {
        const auto doc = nlohmann::json::parse(json_text);
        AmputationPlan plan;
        plan.mechanism = parse_mechanism(doc.at("mechanism").get<std::string>());
        plan.proportion = doc.at("proportion").get<double>();
        for (const auto& row : doc.at("patterns")) {
            std::vector<bool> pattern;
            for (const auto& b : row) {
                pattern.push_back(b.get<int>() != 0);
            }
            plan.patterns.push_back(std::move(pattern));
        }
        plan.pattern_freq = doc.at("pattern_freq").get<std::vector<double>>();
        plan.weights = doc.at("weights").get<std::vector<std::vector<double>>>();
        plan.seed = doc.value("seed", std::uint64_t{0});
        if (doc.value("shift", std::string("RIGHT")) != "RIGHT") {
            throw Error(ErrorCode::InvalidPlan, "only the RIGHT logistic shift is supported");
        }
        return plan;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Config, std::string("amputation plan: ") + e.what());
    }
}

namespace {

std::vector<double> average_ranks(std::span<const double> x)
{
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    std::size_t t = 0;
    while (t < idx.size()) {
        std::size_t u = t;
        while (u + 1 < idx.size() && x[idx[u + 1]] == x[idx[t]]) {
            ++u;
        }
        const double r = 0.5 * static_cast<double>(t + u) + 1.0;
        for (std::size_t v = t; v <= u; ++v) {
            ranks[idx[v]] = r;
        }
        t = u + 1;
    }
    return ranks;
}

} // namespace

double spearman_correlation(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) {
        return 0.0;
    }
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) {
        return 0.0;
    }
    return sxy / std::sqrt(sxx * syy);
}

DependenceReport mar_dependence_check(const Dataset& complete, const MaskReplicate& replicate, const AmputationPlan& plan)
{
    const auto& mask = replicate.mask;
    const auto n = complete.rows();
    const auto p = complete.cols();
    DependenceReport report;
    if (mask.rows() != n || mask.cols() != p || plan.patterns.empty()) {
        return report;
    }
    const auto z = standardized_columns(complete);
    std::size_t informative = 0;
    double z_sum = 0.0;
    for (std::size_t k = 0; k < plan.patterns.size(); ++k) {
        const auto& pattern = plan.patterns[k];
        std::vector<double> score(n, 0.0);
        std::vector<double> hit(n, 0.0);
        PatternDependence dep;
        dep.pattern = k;
        dep.rows = n;
        for (std::size_t i = 0; i < n; ++i) {
            bool all_masked = true;
            for (std::size_t j = 0; j < p; ++j) {
                if (pattern[j]) {
                    all_masked = all_masked && mask(i, j);
                } else {
                    score[i] += plan.weights[k][j] * z[j][i];
                }
            }
            hit[i] = all_masked ? 1.0 : 0.0;
            dep.masked_rows += all_masked ? 1 : 0;
        }
        dep.spearman = spearman_correlation(score, hit);
        const bool constant_score = std::all_of(score.begin(), score.end(), [&](double s) { return s == score.front(); });
        if (dep.masked_rows > 0 && dep.masked_rows < n && !constant_score) {
            const double zstat = dep.spearman * std::sqrt(static_cast<double>(n - 1));
            dep.p_value = 0.5 * std::erfc(zstat / std::sqrt(2.0));
            ++informative;
            z_sum += zstat;
        }
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return score[a] < score[b]; });
        const auto quarter = std::max<std::size_t>(1, n / 4);
        double low = 0.0;
        double high = 0.0;
        for (std::size_t t = 0; t < quarter; ++t) {
            low += hit[idx[t]];
            high += hit[idx[n - 1 - t]];
        }
        dep.bottom_quartile_rate = low / static_cast<double>(quarter);
        dep.top_quartile_rate = high / static_cast<double>(quarter);
        report.patterns.push_back(dep);
    }
    if (informative > 0) {
        const double z = z_sum / std::sqrt(static_cast<double>(informative));
        report.combined_p_value = 0.5 * std::erfc(z / std::sqrt(2.0));
    }
    return report;
}

} // namespace impbench
