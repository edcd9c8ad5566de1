#include "impbench/report.hpp"

#include "impbench/csv.hpp"
#include "impbench/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>

namespace impbench {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr Status kStatuses[] = {Status::Success,           Status::ModifiedObserved, Status::MissingRemained,
                                Status::ComputationalError, Status::Timeout,          Status::InvalidCategory};

std::ofstream open_out(const fs::path& path)
{
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
    return out;
}

std::string num(double v)
{
    return format_double(v);
}

// Metrics present in the records that can be ranked, in enum order.
std::vector<Metric> ranked_metrics(std::span<const ScenarioRecord> records)
{
    std::set<Metric> present;
    for (const auto& r : records) {
        present.insert(r.metric);
        if (r.metric == Metric::EnergyDistance) {
            present.insert(Metric::NRMSE);
        }
    }
    std::vector<Metric> out;
    for (auto m : present) {
        if (is_ranked(m)) {
            out.push_back(m);
        }
    }
    return out;
}

struct Scoped {
    std::string scope;
    RankTable table;
};

std::vector<Scoped> tables_for(std::span<const ScenarioRecord> records, Metric metric)
{
    std::vector<Scoped> out;
    const std::pair<const char*, std::optional<std::string>> scopes[] = {
        {"pooled", std::nullopt}, {"numeric", "numeric"}, {"mixed", "mixed"}};
    for (const auto& [scope, filter] : scopes) {
        try {
            out.push_back({scope, rank(records, metric, filter)});
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EmptyInput) {
                throw;
            }
        }
    }
    return out;
}

double median_of(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const auto mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

ordered_json summary_json(const RankTable& t)
{
    auto rows = ordered_json::array();
    for (const auto& m : t.methods) {
        rows.push_back({{"method", m.method},
                        {"scenarios", m.scenarios},
                        {"success_rate", m.success_rate()},
                        {"mean_rank", m.mean_rank},
                        {"median_rank", m.median_rank}});
    }
    return rows;
}

} // namespace

double ErrorFractions::fraction(Status s) const
{
    const auto it = counts.find(s);
    return runs && it != counts.end() ? static_cast<double>(it->second) / static_cast<double>(runs) : 0.0;
}

double ErrorFractions::error_fraction() const
{
    if (runs == 0) {
        return 0.0;
    }
    const auto it = counts.find(Status::Success);
    const std::size_t ok = it == counts.end() ? 0 : it->second;
    return static_cast<double>(runs - ok) / static_cast<double>(runs);
}

std::vector<ErrorFractions> error_fractions(std::span<const ScenarioRecord> records)
{
    std::map<std::string, ErrorFractions> by_method;
    ErrorFractions all{"all", 0, {}};
    for (const auto& r : records) {
        auto& e = by_method[r.key.method];
        e.method = r.key.method;
        ++e.runs;
        ++e.counts[r.status];
        ++all.runs;
        ++all.counts[r.status];
    }
    std::vector<ErrorFractions> out;
    for (auto& [name, e] : by_method) {
        out.push_back(std::move(e));
    }
    out.push_back(std::move(all));
    return out;
}

std::string format_rank_table(const RankTable& table)
{
    std::ostringstream out;
    std::size_t width = 6;
    for (const auto& m : table.methods) {
        width = std::max(width, m.method.size());
    }
    out << "metric: " << to_string(table.metric) << " (" << to_string(orientation_of(table.metric)) << "), "
        << table.scenarios.size() << " scenarios\n";
    out << std::left << std::setw(static_cast<int>(width) + 2) << "method" << std::right << std::setw(10) << "mean"
        << std::setw(10) << "median" << std::setw(10) << "success" << std::setw(11) << "scenarios" << '\n';
    out << std::fixed;
    for (const auto& m : table.methods) {
        out << std::left << std::setw(static_cast<int>(width) + 2) << m.method << std::right << std::setprecision(3)
            << std::setw(10) << m.mean_rank << std::setw(10) << m.median_rank << std::setw(10) << m.success_rate()
            << std::setw(11) << m.scenarios << '\n';
    }
    return out.str();
}

void write_report(std::span<const ScenarioRecord> records, const fs::path& out_dir)
{
    if (records.empty()) {
        throw Error(ErrorCode::EmptyInput, "the result store is empty");
    }
    fs::create_directories(out_dir);
    const auto metrics = ranked_metrics(records);

    auto long_csv = open_out(out_dir / "ranks_long.csv");
    long_csv << "metric,dataset,data_type,mechanism,proportion,replicate,method,rank,failed,degenerate\n";
    auto summary_csv = open_out(out_dir / "rank_summary.csv");
    summary_csv << "metric,scope,position,method,scenarios,successes,success_rate,mean_rank,median_rank\n";
    auto topk_csv = open_out(out_dir / "topk.csv");
    topk_csv << "metric,scope,method,k,coverage\n";

    ordered_json summary;
    summary["records"] = records.size();
    auto tables_json = ordered_json::object();
    auto degenerate_json = ordered_json::array();

    for (auto metric : metrics) {
        const auto tables = tables_for(records, metric);
        for (const auto& [scope, table] : tables) {
            std::size_t position = 0;
            for (const auto& m : table.methods) {
                summary_csv << to_string(metric) << ',' << scope << ',' << ++position << ',' << m.method << ','
                            << m.scenarios << ',' << m.successes << ',' << num(m.success_rate()) << ','
                            << num(m.mean_rank) << ',' << num(m.median_rank) << '\n';
                for (std::size_t k = 1; k <= table.methods.size(); ++k) {
                    const std::string subset[] = {m.method};
                    topk_csv << to_string(metric) << ',' << scope << ',' << m.method << ',' << k << ','
                             << num(top_k_coverage(table, subset, static_cast<double>(k))) << '\n';
                }
            }
            tables_json[std::string(to_string(metric))][scope] = summary_json(table);
            if (scope != "pooled") {
                continue;
            }
            for (const auto& s : table.scenarios) {
                for (const auto& r : s.ranks) {
                    long_csv << to_string(metric) << ',' << s.id.dataset << ',' << s.id.data_type << ','
                             << s.id.mechanism << ',' << num(s.id.proportion) << ',' << s.id.replicate << ','
                             << r.method << ',' << num(r.rank) << ',' << (r.failed ? 1 : 0) << ','
                             << (s.degenerate ? 1 : 0) << '\n';
                }
                if (s.degenerate) {
                    degenerate_json.push_back({{"metric", to_string(metric)},
                                               {"dataset", s.id.dataset},
                                               {"mechanism", s.id.mechanism},
                                               {"proportion", s.id.proportion},
                                               {"replicate", s.id.replicate}});
                }
            }
        }
    }

    const auto fractions = error_fractions(records);
    auto err_csv = open_out(out_dir / "error_fractions.csv");
    err_csv << "method,runs";
    for (auto s : kStatuses) {
        err_csv << ',' << to_string(s);
    }
    err_csv << ",error\n";
    auto errors_json = ordered_json::array();
    for (const auto& e : fractions) {
        err_csv << e.method << ',' << e.runs;
        ordered_json row{{"method", e.method}, {"runs", e.runs}};
        for (auto s : kStatuses) {
            err_csv << ',' << num(e.fraction(s));
            row[std::string(to_string(s))] = e.fraction(s);
        }
        err_csv << ',' << num(e.error_fraction()) << '\n';
        row["error"] = e.error_fraction();
        errors_json.push_back(std::move(row));
    }

    std::map<std::string, std::vector<double>> durations;
    for (const auto& r : records) {
        durations[r.key.method].push_back(r.duration_seconds);
    }
    auto rt_csv = open_out(out_dir / "runtime.csv");
    rt_csv << "method,runs,mean_seconds,median_seconds,max_seconds,total_seconds\n";
    for (const auto& [method, d] : durations) {
        const double total = std::accumulate(d.begin(), d.end(), 0.0);
        rt_csv << method << ',' << d.size() << ',' << num(total / static_cast<double>(d.size())) << ','
               << num(median_of(d)) << ',' << num(*std::max_element(d.begin(), d.end())) << ',' << num(total)
               << '\n';
    }

    auto undefined_json = ordered_json::array();
    for (const auto& r : records) {
        if (r.status == Status::Success && !r.value) {
            undefined_json.push_back({{"dataset", r.key.dataset}, {"method", r.key.method}, {"detail", r.detail}});
        }
    }

    summary["error_fractions"] = std::move(errors_json);
    summary["rank_tables"] = std::move(tables_json);
    summary["degenerate_scenarios"] = std::move(degenerate_json);
    summary["undefined_scores"] = std::move(undefined_json);
    auto json_out = open_out(out_dir / "summary.json");
    json_out << summary.dump(2) << '\n';
}

} // namespace impbench
