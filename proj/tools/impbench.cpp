#include "impbench/config.hpp"
#include "impbench/csv.hpp"
#include "impbench/diagnostics.hpp"
#include "impbench/errors.hpp"
#include "impbench/orchestrator.hpp"
#include "impbench/ranking.hpp"
#include "impbench/report.hpp"
#include "impbench/store.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace impbench;

int cmd_run(const std::string& config_path, std::size_t jobs, bool resume, bool quiet)
{
    const auto config = load_config(config_path);
    RunOptions options;
    options.resume = resume;
    options.jobs = jobs;
    if (!quiet) {
        options.progress = [](const ScenarioRecord& r, std::size_t done, std::size_t total) {
            std::clog << '[' << done << '/' << total << "] " << r.key.dataset << ' ' << r.key.mechanism << ' '
                      << format_double(r.key.proportion) << " rep " << r.key.replicate << ' ' << r.key.method << ": "
                      << to_string(r.status);
            if (r.value) {
                std::clog << ' ' << to_string(r.metric) << '=' << format_double(*r.value);
            }
            if (!r.detail.empty() && r.status != Status::Success) {
                std::clog << " (" << r.detail << ')';
            }
            std::clog << '\n';
        };
    }
    const auto summary = run_benchmark(config, options);
    std::cout << "scenarios: " << summary.scenarios << ", run: " << summary.executed
              << ", skipped (already stored): " << summary.skipped << ", failures: " << summary.failures << '\n'
              << "store: " << config.store.string() << '\n';
    return 0;
}

int cmd_rank(const std::string& store, const std::string& metric, const std::string& data_type)
{
    const auto records = load_records(store);
    std::optional<std::string> filter;
    if (!data_type.empty() && data_type != "pooled") {
        filter = data_type;
    }
    const auto table = rank(records, parse_metric(metric), filter);
    std::cout << format_rank_table(table);
    std::size_t degenerate = 0;
    for (const auto& s : table.scenarios) {
        degenerate += s.degenerate ? 1 : 0;
    }
    if (degenerate > 0) {
        std::cout << degenerate << " scenario(s) where every method failed\n";
    }
    return 0;
}

int cmd_report(const std::string& store, const std::string& out)
{
    const auto records = load_records(store);
    write_report(records, out);
    std::cout << "wrote report for " << records.size() << " records to " << out << '\n';
    return 0;
}

int cmd_validate(const std::string& command, double timeout, std::uint64_t seed)
{
    auto spec = ImputerSpec::of(ImputerKind::External, "plugin");
    spec.command = command;
    spec.timeout_seconds = timeout;
    const auto imputer = make_imputer(spec);
    RetryOptions retry;
    retry.timeout_seconds = timeout;
    const auto report = run_categorical_diagnostics(*imputer, seed, retry);
    for (const auto& r : report.results) {
        std::cout << to_string(r.format) << ": " << to_string(r.verdict.status);
        if (r.verdict.attempts > 1) {
            std::cout << " (attempts " << r.verdict.attempts << ')';
        }
        if (!r.verdict.detail.empty()) {
            std::cout << " - " << r.verdict.detail;
        }
        std::cout << '\n';
    }
    std::cout << "categorical data: " << (report.capable() ? "supported" : "not supported") << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"impbench - benchmark harness for missing-value imputation"};
    app.require_subcommand(1);

    std::string config_path;
    std::size_t jobs = 0;
    bool resume = false;
    bool quiet = false;
    auto* run = app.add_subcommand("run", "Run a benchmark grid");
    run->add_option("--config", config_path, "JSON benchmark config")->required()->check(CLI::ExistingFile);
    run->add_option("--jobs", jobs, "Parallel scenario workers (overrides the config)");
    run->add_flag("--resume", resume, "Continue an interrupted store, skipping finished scenarios");
    run->add_flag("--quiet", quiet, "No per-scenario progress lines");

    std::string store;
    std::string metric = "energy";
    std::string data_type;
    auto* rank_cmd = app.add_subcommand("rank", "Print the mean/median rank table of a result store");
    rank_cmd->add_option("--store", store, "JSON-lines result store")->required()->check(CLI::ExistingFile);
    rank_cmd->add_option("--metric", metric, "energy, nrmse or iscore")->capture_default_str();
    rank_cmd->add_option("--data-type", data_type, "pooled (default), numeric or mixed");

    std::string out_dir;
    auto* report = app.add_subcommand("report", "Write CSV/JSON summaries of a result store");
    report->add_option("--store", store, "JSON-lines result store")->required()->check(CLI::ExistingFile);
    report->add_option("--out", out_dir, "Output directory")->required();

    std::string command;
    double timeout = 60.0;
    std::uint64_t seed = 1;
    auto* validate = app.add_subcommand("validate-method", "Run the categorical-format diagnostics on a plugin");
    validate->add_option("--cmd", command, "Plugin command; called as <cmd> <in.csv> <out.csv> <seed>")->required();
    validate->add_option("--timeout", timeout, "Seconds per diagnostic case")->capture_default_str();
    validate->add_option("--seed", seed, "Seed for the diagnostic data and the plugin")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            return cmd_run(config_path, jobs, resume, quiet);
        }
        if (*rank_cmd) {
            return cmd_rank(store, metric, data_type);
        }
        if (*report) {
            return cmd_report(store, out_dir);
        }
        if (*validate) {
            return cmd_validate(command, timeout, seed);
        }
    } catch (const std::exception& e) {
        std::cerr << "impbench: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
