#include "impbench/ranking.hpp"

#include "impbench/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace impbench {

std::vector<double> rank_scores(std::span<const std::optional<double>> scores, Orientation orientation)
{
    std::vector<std::size_t> ok;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i]) {
            ok.push_back(i);
        }
    }
    auto better = [&](std::size_t a, std::size_t b) {
        return orientation == Orientation::LowerBetter ? *scores[a] < *scores[b] : *scores[a] > *scores[b];
    };
    std::stable_sort(ok.begin(), ok.end(), better);

    std::vector<double> ranks(scores.size(), static_cast<double>(ok.size() + 1));
    for (std::size_t first = 0; first < ok.size();) {
        std::size_t last = first + 1;
        while (last < ok.size() && *scores[ok[last]] == *scores[ok[first]]) {
            ++last;
        }
        // Positions first+1 .. last share their mean.
        const double shared = 0.5 * static_cast<double>(first + 1 + last);
        for (std::size_t t = first; t < last; ++t) {
            ranks[ok[t]] = shared;
        }
        first = last;
    }
    return ranks;
}

const MethodSummary* RankTable::find(std::string_view method) const
{
    for (const auto& m : methods) {
        if (m.method == method) {
            return &m;
        }
    }
    return nullptr;
}

RankTable rank(std::span<const ScenarioRecord> records, Metric metric, std::optional<std::string> data_type)
{
    if (!is_ranked(metric)) {
        throw Error(ErrorCode::Config, std::string(to_string(metric)) + " is reported but not ranked");
    }
    // Auxiliary metrics ride on energy records, so a record qualifies when it
    // carries `metric` as primary value or could carry it as an auxiliary one.
    auto carries = [&](const ScenarioRecord& r) {
        return r.metric == metric || (metric == Metric::NRMSE && r.metric == Metric::EnergyDistance);
    };

    std::map<ScenarioId, std::map<std::string, std::optional<double>>> groups;
    for (const auto& r : records) {
        if (!carries(r) || (data_type && r.data_type != *data_type)) {
            continue;
        }
        const ScenarioId id{r.key.dataset, r.data_type, r.key.mechanism, r.key.proportion, r.key.replicate};
        if (r.status == Status::Success && !r.value_of(metric)) {
            continue;
        }
        groups[id][r.key.method] = r.status == Status::Success ? r.value_of(metric) : std::nullopt;
    }
    if (groups.empty()) {
        throw Error(ErrorCode::EmptyInput, "no records to rank for metric " + std::string(to_string(metric)));
    }

    RankTable table;
    table.metric = metric;
    std::map<std::string, std::vector<double>> per_method;
    std::map<std::string, std::size_t> successes;
    for (const auto& [id, methods] : groups) {
        std::vector<std::optional<double>> scores;
        for (const auto& [name, value] : methods) {
            scores.push_back(value);
        }
        const auto ranks = rank_scores(scores, orientation_of(metric));
        ScenarioRanks sr;
        sr.id = id;
        std::size_t t = 0;
        for (const auto& [name, value] : methods) {
            sr.ranks.push_back({name, ranks[t], !value.has_value()});
            per_method[name].push_back(ranks[t]);
            if (value) {
                ++sr.successes;
                ++successes[name];
            }
            ++t;
        }
        sr.degenerate = sr.successes == 0;
        table.scenarios.push_back(std::move(sr));
    }

    for (auto& [name, ranks] : per_method) {
        MethodSummary m;
        m.method = name;
        m.scenarios = ranks.size();
        m.successes = successes[name];
        m.mean_rank = std::accumulate(ranks.begin(), ranks.end(), 0.0) / static_cast<double>(ranks.size());
        std::sort(ranks.begin(), ranks.end());
        const auto mid = ranks.size() / 2;
        m.median_rank = ranks.size() % 2 ? ranks[mid] : 0.5 * (ranks[mid - 1] + ranks[mid]);
        table.methods.push_back(std::move(m));
    }
    std::sort(table.methods.begin(), table.methods.end(), [](const MethodSummary& a, const MethodSummary& b) {
        if (a.mean_rank != b.mean_rank) {
            return a.mean_rank < b.mean_rank;
        }
        if (a.median_rank != b.median_rank) {
            return a.median_rank < b.median_rank;
        }
        return a.method < b.method;
    });
    return table;
}

double top_k_coverage(const RankTable& table, std::span<const std::string> subset, double k)
{
    if (table.scenarios.empty()) {
        return 0.0;
    }
    std::size_t covered = 0;
    for (const auto& s : table.scenarios) {
        const bool hit = std::any_of(s.ranks.begin(), s.ranks.end(), [&](const MethodRank& r) {
            return r.rank <= k && std::find(subset.begin(), subset.end(), r.method) != subset.end();
        });
        covered += hit ? 1 : 0;
    }
    return static_cast<double>(covered) / static_cast<double>(table.scenarios.size());
}

} // namespace impbench
