#include "impbench/orchestrator.hpp"

#include "impbench/amputation.hpp"
#include "impbench/csv.hpp"
#include "impbench/errors.hpp"
#include "impbench/iscore.hpp"
#include "impbench/random.hpp"
#include "impbench/store.hpp"
#include "impbench/validation.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

namespace impbench {

namespace {

constexpr std::string_view kRealMechanism = "real";

struct Scenario {
    std::size_t dataset = 0;
    std::size_t method = 0;
    std::size_t mask = 0; // index into the mask table; unused for iscore
    ScenarioKey key;
    std::uint64_t seed = 0;
};

struct Grid {
    std::vector<Scenario> scenarios;
    std::vector<Mask> masks;
};

Grid build_grid(const BenchmarkConfig& cfg, const std::vector<LoadedDataset>& datasets)
{
    Grid grid;
    for (std::size_t d = 0; d < datasets.size(); ++d) {
        const auto& ds = datasets[d];
        const bool mixed = ds.data.has_categorical();
        auto eligible = [&](const ImputerSpec& m) { return !mixed || m.supports_categorical; };

        if (ds.entry.mode == MetricMode::IScore) {
            const auto fraction = ds.data.mask().fraction();
            const auto base = mix_seed(cfg.seed, hash_string(ds.entry.id));
            for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
                if (!eligible(cfg.methods[m])) {
                    continue;
                }
                grid.scenarios.push_back({d, m, 0, {ds.entry.id, cfg.methods[m].name, std::string(kRealMechanism),
                                                    fraction, 0},
                                          imputer_seed(base, cfg.methods[m].name)});
            }
            continue;
        }
        for (auto mech : cfg.mechanisms) {
            for (double prop : cfg.proportions) {
                const auto plan = AmputationPlan::make_default(ds.data.cols(), mech, prop,
                                                               amputation_seed(cfg.seed, ds.entry.id, mech, prop));
                for (int rep = 0; rep < cfg.replicates; ++rep) {
                    grid.masks.push_back(amputate(ds.data, plan, rep).mask);
                    const auto scenario_seed = mix_seed(plan.seed, static_cast<std::uint64_t>(rep) + 1);
                    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
                        if (!eligible(cfg.methods[m])) {
                            continue;
                        }
                        grid.scenarios.push_back(
                            {d, m, grid.masks.size() - 1,
                             {ds.entry.id, cfg.methods[m].name, std::string(to_string(mech)), prop, rep},
                             imputer_seed(scenario_seed, cfg.methods[m].name)});
                    }
                }
            }
        }
    }
    return grid;
}

ScenarioRecord base_record(const Scenario& s, const LoadedDataset& ds, Metric metric)
{
    ScenarioRecord r;
    r.key = s.key;
    r.data_type = ds.data_type;
    r.metric = metric;
    r.orientation = orientation_of(metric);
    return r;
}

ScenarioRecord run_energy(const BenchmarkConfig& cfg, const Scenario& s, const LoadedDataset& ds, const Mask& mask)
{
    auto r = base_record(s, ds, Metric::EnergyDistance);
    const auto imputer = make_imputer(cfg.methods[s.method]);
    const auto incomplete = ds.data.with_mask(mask);
    RetryOptions retry;
    retry.timeout_seconds = cfg.timeout_seconds;
    const auto run = run_with_retry(*imputer, incomplete, s.seed, retry);
    r.status = run.verdict.status;
    r.detail = run.verdict.detail;
    r.attempts = run.verdict.attempts;
    r.duration_seconds = run.duration_seconds;
    if (!run.verdict.success()) {
        return r;
    }
    const auto& imputed = std::get<Dataset>(run.outcome);
    try {
        r.value = standardized_energy(ds.data, imputed).value;
        r.nrmse = nrmse(ds.data, imputed, mask).value;
        r.mpe = mpe(ds.data, imputed, mask).value;
    } catch (const std::exception& e) {
        r.status = Status::ComputationalError;
        r.detail = std::string("scoring failed: ") + e.what();
        r.value.reset();
        r.nrmse.reset();
        r.mpe.reset();
    }
    return r;
}

ScenarioRecord run_iscore(const BenchmarkConfig& cfg, const Scenario& s, const LoadedDataset& ds)
{
    auto r = base_record(s, ds, Metric::EnergyIScore);
    const auto imputer = make_imputer(cfg.methods[s.method]);
    IScoreConfig icfg;
    icfg.draws = cfg.iscore_draws;
    const RetryOptions retry;
    for (int attempt = 1; attempt <= 2; ++attempt) {
        r.attempts = attempt;
        const auto seed = s.seed + static_cast<std::uint64_t>(attempt - 1) * retry.seed_offset;
        const auto start = std::chrono::steady_clock::now();
        std::optional<Failure> failure;
        std::optional<double> value;
        try {
            value = energy_iscore(ds.data, *imputer, seed, icfg).score.value;
        } catch (const std::exception& e) {
            failure = failure_from(e);
        }
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        r.duration_seconds = elapsed.count();
        if (!failure && imputer->enforced_timeout() <= 0.0 && r.duration_seconds > cfg.timeout_seconds) {
            failure = Failure{Status::Timeout, "finished after " + format_double(r.duration_seconds) + " s, limit "
                                                   + format_double(cfg.timeout_seconds) + " s"};
        }
        if (!failure) {
            r.status = Status::Success;
            r.detail = value ? "" : "no evaluable rows";
            r.value = value;
            return r;
        }
        r.status = failure->status;
        r.detail = failure->message;
        if (failure->status != Status::ComputationalError) {
            break;
        }
    }
    return r;
}

} // namespace

std::uint64_t amputation_seed(std::uint64_t global_seed, const std::string& dataset, Mechanism mechanism,
                              double proportion)
{
    return mix_seed(global_seed,
                    hash_string(dataset + "|" + std::string(to_string(mechanism)) + "|" + format_double(proportion)));
}

std::uint64_t imputer_seed(std::uint64_t scenario_seed, const std::string& method)
{
    return mix_seed(scenario_seed, hash_string(method));
}

std::vector<LoadedDataset> load_datasets(const BenchmarkConfig& config)
{
    std::vector<LoadedDataset> out;
    for (const auto& entry : config.datasets) {
        const auto schema = load_schema_config(entry.schema);
        auto data = load_csv(entry.path, schema);
        if (entry.mode == MetricMode::Energy && data.has_missing()) {
            throw Error(ErrorCode::Config, "dataset '" + entry.id + "' has missing values; the energy metric needs "
                                                                    "complete data (use metric \"iscore\")");
        }
        if (entry.mode == MetricMode::IScore && !data.has_missing()) {
            throw Error(ErrorCode::Config, "dataset '" + entry.id + "' has no missing values to score with iscore");
        }
        std::string type = data.has_categorical() ? "mixed" : "numeric";
        out.push_back({entry, std::move(data), std::move(type)});
    }
    return out;
}

RunSummary run_benchmark(const BenchmarkConfig& config, const RunOptions& options)
{
    const auto datasets = load_datasets(config);
    const auto grid = build_grid(config, datasets);
    ResultStore store(config.store, options.resume);

    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < grid.scenarios.size(); ++i) {
        if (!store.contains(grid.scenarios[i].key)) {
            pending.push_back(i);
        }
    }
    RunSummary summary;
    summary.scenarios = grid.scenarios.size();
    summary.skipped = grid.scenarios.size() - pending.size();

    std::vector<std::optional<ScenarioRecord>> slots(pending.size());
    std::mutex mutex;
    std::condition_variable ready;
    std::atomic<std::size_t> next{0};
    std::exception_ptr fatal;

    auto worker = [&] {
        for (;;) {
            const auto t = next.fetch_add(1);
            if (t >= pending.size()) {
                return;
            }
            const auto& s = grid.scenarios[pending[t]];
            const auto& ds = datasets[s.dataset];
            std::optional<ScenarioRecord> record;
            try {
                record = ds.entry.mode == MetricMode::IScore ? run_iscore(config, s, ds)
                                                             : run_energy(config, s, ds, grid.masks[s.mask]);
            } catch (...) {
                std::lock_guard lock(mutex);
                if (!fatal) {
                    fatal = std::current_exception();
                }
                next = pending.size();
            }
            {
                std::lock_guard lock(mutex);
                slots[t] = std::move(record);
            }
            ready.notify_all();
        }
    };

    const auto jobs = std::max<std::size_t>(1, options.jobs ? options.jobs : config.jobs);
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(jobs, std::max<std::size_t>(pending.size(), 1)); ++w) {
        pool.emplace_back(worker);
    }

    for (std::size_t t = 0; t < pending.size(); ++t) {
        std::unique_lock lock(mutex);
        ready.wait(lock, [&] { return slots[t].has_value() || fatal; });
        if (fatal) {
            break;
        }
        auto record = std::move(*slots[t]);
        slots[t].reset();
        lock.unlock();
        store.append(record);
        ++summary.executed;
        if (record.status != Status::Success) {
            ++summary.failures;
        }
        if (options.progress) {
            options.progress(record, summary.skipped + summary.executed, summary.scenarios);
        }
    }
    pool.clear();
    if (fatal) {
        std::rethrow_exception(fatal);
    }
    return summary;
}

} // namespace impbench
