// Acceptance checks. Prints one [PASS]/[FAIL] line per criterion and exits
// nonzero when any criterion fails.

#include "impbench/amputation.hpp"
#include "impbench/config.hpp"
#include "impbench/diagnostics.hpp"
#include "impbench/errors.hpp"
#include "impbench/imputers.hpp"
#include "impbench/iscore.hpp"
#include "impbench/metrics.hpp"
#include "impbench/orchestrator.hpp"
#include "impbench/ranking.hpp"
#include "impbench/store.hpp"
#include "impbench/validation.hpp"

#include "oracles.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace impbench;
namespace fs = std::filesystem;

namespace {

struct Check {
    bool ok = true;
    std::vector<std::string> notes;

    void expect(bool condition, const std::string& what)
    {
        if (!condition) {
            ok = false;
            notes.push_back("failed: " + what);
        }
    }
    void note(const std::string& text) { notes.push_back(text); }
};

std::string fmt(double v, int precision = 4)
{
    std::ostringstream out;
    out << std::setprecision(precision) << v;
    return out.str();
}

std::string fixture(const std::string& name)
{
    return (fs::path(IMPBENCH_FIXTURE_DIR) / name).string();
}

// ---------------------------------------------------------------- 1

void metric_units(Check& c)
{
    auto column = [](std::vector<double> v) {
        const auto n = v.size();
        return EncodedMatrix(n, 1, std::move(v));
    };
    const double same = energy_distance_value(column({0.0, 2.0}), column({0.0, 2.0}));
    const double single = energy_distance_value(column({0.0}), column({1.0}));
    const double pair = energy_distance_value(column({0.0, 2.0}), column({1.0, 1.0}));
    c.expect(std::abs(same) <= 1e-12, "e(X, X) = 0, got " + fmt(same));
    c.expect(std::abs(single - 2.0) <= 1e-12, "e({0}, {1}) = 2, got " + fmt(single, 17));
    c.expect(std::abs(pair - 1.0) <= 1e-12, "e({0,2}, {1,1}) = 1, got " + fmt(pair, 17));

    auto rng = make_rng(20240601);
    std::uniform_int_distribution<std::size_t> rows(1, 50);
    std::uniform_int_distribution<std::size_t> dims(1, 8);
    std::uniform_real_distribution<double> shift(0.0, 2.0);
    double worst = 0.0;
    int within = 0;
    for (int t = 0; t < 200; ++t) {
        const auto n = rows(rng);
        const auto d = dims(rng);
        const auto x = oracle::random_matrix(n, d, rng);
        const auto y = oracle::random_matrix(n, d, rng, shift(rng));
        const double got = energy_distance_value(x, y, EnergyOptions{static_cast<std::size_t>(t % 4 + 1), 64});
        const double diff = std::abs(got - oracle::energy_distance(x, y));
        worst = std::max(worst, diff);
        within += diff <= 1e-12 ? 1 : 0;
    }
    c.expect(within == 200, std::to_string(within) + "/200 instances within 1e-12");
    c.note("hand cases exact; 200/200 oracle instances, max |diff| " + fmt(worst, 3));
}

// ---------------------------------------------------------------- 2, 3

struct GaussianRun {
    Dataset complete;
    Dataset incomplete;
    Mask mask;
};

GaussianRun gaussian_run(int s)
{
    auto complete = oracle::bivariate_gaussian(5000, 7000 + static_cast<std::uint64_t>(s));
    auto mask = oracle::mcar_column(complete, 0, 0.5, 8000 + static_cast<std::uint64_t>(s));
    auto incomplete = complete.with_mask(mask);
    return {std::move(complete), std::move(incomplete), std::move(mask)};
}

double rmse_masked(const Dataset& complete, const Dataset& imputed, const Mask& mask)
{
    double ss = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < complete.rows(); ++i) {
        if (mask(i, 0)) {
            const double d = complete.number(i, 0) - imputed.number(i, 0);
            ss += d * d;
            ++k;
        }
    }
    return std::sqrt(ss / static_cast<double>(k));
}

void imputation_is_not_prediction(Check& c)
{
    const auto norm = make_imputer(ImputerSpec::of(ImputerKind::Norm));
    const auto predict = make_imputer(ImputerSpec::of(ImputerKind::NormPredict));
    int rmse_prefers_predict = 0;
    int energy_prefers_norm = 0;
    int iscore_prefers_norm = 0;
    double ratio_sum = 0.0;
    constexpr int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        const auto run = gaussian_run(s);
        const auto seed = static_cast<std::uint64_t>(100 + s);
        const auto by_norm = norm->run(run.incomplete, seed);
        const auto by_predict = predict->run(run.incomplete, seed);

        const double rmse_norm = rmse_masked(run.complete, by_norm, run.mask);
        const double rmse_predict = rmse_masked(run.complete, by_predict, run.mask);
        rmse_prefers_predict += rmse_predict < rmse_norm ? 1 : 0;
        ratio_sum += rmse_norm / rmse_predict;

        const double e_norm = *standardized_energy(run.complete, by_norm).value;
        const double e_predict = *standardized_energy(run.complete, by_predict).value;
        energy_prefers_norm += e_norm < e_predict ? 1 : 0;

        const double i_norm = *energy_iscore(run.incomplete, *norm, seed).score.value;
        const double i_predict = *energy_iscore(run.incomplete, *predict, seed).score.value;
        iscore_prefers_norm += i_norm > i_predict ? 1 : 0;
    }
    const double ratio = ratio_sum / seeds;
    c.expect(rmse_prefers_predict >= 19, "RMSE prefers norm.predict in >= 19/20 seeds");
    c.expect(ratio >= 1.25 && ratio <= 1.55, "mean RMSE ratio norm/norm.predict in [1.25, 1.55]");
    c.expect(energy_prefers_norm >= 19, "energy distance prefers norm in >= 19/20 seeds");
    c.expect(iscore_prefers_norm >= 18, "I-Score prefers norm in >= 18/20 seeds");
    c.note("RMSE favours norm.predict " + std::to_string(rmse_prefers_predict) + "/20, mean ratio " + fmt(ratio)
           + "; energy favours norm " + std::to_string(energy_prefers_norm) + "/20; I-Score favours norm "
           + std::to_string(iscore_prefers_norm) + "/20");
}

void slope_bias(Check& c)
{
    const auto run = gaussian_run(0);
    auto slope_on = [&](const Dataset& data, bool masked_rows) {
        std::vector<double> x1, x2;
        for (std::size_t i = 0; i < data.rows(); ++i) {
            if (run.mask(i, 0) == masked_rows) {
                x1.push_back(data.number(i, 0));
                x2.push_back(data.number(i, 1));
            }
        }
        return oracle::simple_regression(x1, x2);
    };
    const auto by_predict = make_imputer(ImputerSpec::of(ImputerKind::NormPredict))->run(run.incomplete, 1);
    const auto by_norm = make_imputer(ImputerSpec::of(ImputerKind::Norm))->run(run.incomplete, 1);
    const auto predict = slope_on(by_predict, true);
    const auto norm = slope_on(by_norm, true);
    const auto complete_case = slope_on(run.complete, false);
    c.expect(predict.slope - 1.0 > 5.0 * predict.se, "norm.predict slope exceeds 1 by more than 5 SE");
    c.expect(std::abs(norm.slope - 1.0) <= 3.0 * norm.se, "norm slope within 3 SE of 1");
    c.expect(std::abs(complete_case.slope - 1.0) <= 3.0 * complete_case.se, "complete-case slope within 3 SE of 1");
    c.note("slope of x2 on x1: norm.predict " + fmt(predict.slope) + " (SE " + fmt(predict.se, 2) + "), norm "
           + fmt(norm.slope) + " (SE " + fmt(norm.se, 2) + "), complete cases " + fmt(complete_case.slope) + " (SE "
           + fmt(complete_case.se, 2) + ")");
}

// ---------------------------------------------------------------- 4

Dataset correlated_numeric(std::size_t n, std::size_t p, std::uint64_t seed)
{
    auto rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<std::vector<double>> cols(p, std::vector<double>(n));
    std::vector<std::string> names;
    for (std::size_t j = 0; j < p; ++j) {
        names.push_back("v" + std::to_string(j + 1));
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double common = normal(rng);
        for (std::size_t j = 0; j < p; ++j) {
            cols[j][i] = 0.7 * common + 0.7 * normal(rng);
        }
    }
    return Dataset::from_numeric(names, cols);
}

Dataset random_mixed(std::uint64_t seed)
{
    auto rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> rows(40, 300);
    std::uniform_int_distribution<std::uint32_t> level_count(2, 6);
    std::bernoulli_distribution rare(0.05);
    const auto n = rows(rng);
    const auto levels_a = level_count(rng);
    const auto levels_b = level_count(rng);
    auto labels = [](std::uint32_t k) {
        std::vector<std::string> out;
        for (std::uint32_t l = 1; l <= k; ++l) {
            out.push_back("L" + std::to_string(l));
        }
        return out;
    };
    Schema schema{ColumnSchema::numeric("x"), ColumnSchema::categorical("a", labels(levels_a)),
                  ColumnSchema::numeric("y"), ColumnSchema::categorical("b", labels(levels_b))};
    std::vector<Dataset::Column> cols(4);
    std::uniform_int_distribution<std::uint32_t> pick_a(1, levels_a - 1);
    std::uniform_int_distribution<std::uint32_t> pick_b(1, levels_b);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = normal(rng);
        cols[0].emplace_back(x);
        // The last level of a is rare.
        cols[1].emplace_back(Category{rare(rng) ? levels_a : pick_a(rng)});
        cols[2].emplace_back(x + normal(rng));
        cols[3].emplace_back(Category{pick_b(rng)});
    }
    cols[1][0] = Category{levels_a};
    return Dataset(schema, std::move(cols));
}

bool levels_preserved(const Dataset& d, const Mask& m)
{
    for (std::size_t j = 0; j < d.cols(); ++j) {
        if (!d.column_schema(j).is_categorical()) {
            continue;
        }
        std::vector<int> present(d.column_schema(j).levels() + 1, 0), observed(present);
        for (std::size_t i = 0; i < d.rows(); ++i) {
            ++present[d.code(i, j)];
            observed[d.code(i, j)] += m(i, j) ? 0 : 1;
        }
        for (std::size_t k = 1; k < present.size(); ++k) {
            if (present[k] > 0 && observed[k] == 0) {
                return false;
            }
        }
    }
    return true;
}

void amputation_statistics(Check& c)
{
    const auto data = correlated_numeric(500, 10, 41);
    double worst = 0.0;
    for (auto mech : {Mechanism::MCAR, Mechanism::MAR}) {
        for (double prop : {0.1, 0.2, 0.3}) {
            const auto plan = AmputationPlan::make_default(10, mech, prop, 42);
            for (int rep = 0; rep < 2; ++rep) {
                const double realized = amputate(data, plan, rep).mask.fraction();
                worst = std::max(worst, std::abs(realized - prop));
                c.expect(std::abs(realized - prop) <= 0.02, std::string(to_string(mech)) + " at " + fmt(prop)
                                                                + " realized " + fmt(realized));
            }
        }
    }

    const auto mar_plan = AmputationPlan::make_default(10, Mechanism::MAR, 0.3, 43);
    auto mcar_plan = mar_plan;
    mcar_plan.mechanism = Mechanism::MCAR;
    const auto mar = mar_dependence_check(data, amputate(data, mar_plan), mar_plan);
    // The MCAR mask is tested against the MAR plan's scores.
    const auto mcar = mar_dependence_check(data, amputate(data, mcar_plan), mar_plan);
    c.expect(mar.rejects_independence(), "MAR dependence detected (p " + fmt(mar.combined_p_value) + ")");
    c.expect(!mcar.rejects_independence(), "MCAR dependence not detected (p " + fmt(mcar.combined_p_value) + ")");

    int preserved = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto d = random_mixed(900 + s);
        const auto mech = s % 2 ? Mechanism::MAR : Mechanism::MCAR;
        try {
            const auto plan = AmputationPlan::make_default(d.cols(), mech, 0.3, s);
            preserved += levels_preserved(d, amputate(d, plan).mask) ? 1 : 0;
        } catch (const Error&) {
        }
    }
    c.expect(preserved == 100, "category levels preserved on " + std::to_string(preserved) + "/100 datasets");
    c.note("max |realized - target| " + fmt(worst, 3) + "; MAR p " + fmt(mar.combined_p_value, 3) + ", MCAR p "
           + fmt(mcar.combined_p_value, 3) + "; levels kept on " + std::to_string(preserved) + "/100");
}

// ---------------------------------------------------------------- 5

// Reference classification, written directly from the taxonomy rules.
Status classify(const Dataset& original, const Outcome& outcome, std::span<const OneHotGroup> groups)
{
    if (const auto* f = std::get_if<Failure>(&outcome)) {
        return f->status;
    }
    const auto& out = std::get<Dataset>(outcome);
    if (out.rows() != original.rows() || out.cols() != original.cols()) {
        return Status::ComputationalError;
    }
    for (std::size_t i = 0; i < out.rows(); ++i) {
        for (std::size_t j = 0; j < out.cols(); ++j) {
            const auto& cell = out.at(i, j);
            if (is_missing(cell)) {
                return Status::MissingRemained;
            }
            if (const auto* v = std::get_if<double>(&cell); v && !std::isfinite(*v)) {
                return Status::MissingRemained;
            }
        }
    }
    for (std::size_t i = 0; i < out.rows(); ++i) {
        for (std::size_t j = 0; j < out.cols(); ++j) {
            const auto& before = original.at(i, j);
            if (is_missing(before)) {
                continue;
            }
            if (const auto* b = std::get_if<double>(&before)) {
                const auto* a = std::get_if<double>(&out.at(i, j));
                if (!a || std::abs(*a - *b) >= kObservedTolerance) {
                    return Status::ModifiedObserved;
                }
            } else if (out.at(i, j) != before) {
                return Status::ModifiedObserved;
            }
        }
    }
    for (std::size_t i = 0; i < out.rows(); ++i) {
        for (std::size_t j = 0; j < out.cols(); ++j) {
            const auto& col = out.column_schema(j);
            const auto& cell = out.at(i, j);
            if (const auto* k = std::get_if<Category>(&cell)) {
                if (!col.is_categorical() || k->code < 1 || k->code > col.levels()) {
                    return Status::InvalidCategory;
                }
            } else if (col.is_categorical()) {
                return Status::InvalidCategory;
            }
        }
        for (const auto& g : groups) {
            int ones = 0;
            for (auto j : g.columns) {
                const double v = std::get<double>(out.at(i, j));
                if (v != 0.0 && v != 1.0) {
                    return Status::InvalidCategory;
                }
                ones += v == 1.0 ? 1 : 0;
            }
            if (ones != 1) {
                return Status::InvalidCategory;
            }
        }
    }
    return Status::Success;
}

void validation_taxonomy(Check& c)
{
    Schema schema{ColumnSchema::numeric("a"), ColumnSchema::numeric("b"),
                  ColumnSchema::categorical("g", {"red", "green", "blue"})};
    const Dataset incomplete(schema, {{0.0, Missing{}, 2.0, 3.0, 4.0},
                                      {1.0, 2.0, Missing{}, 4.0, 5.0},
                                      {Category{1}, Category{2}, Category{3}, Missing{}, Category{1}}});
    auto external = [](const std::string& script, double timeout = 20.0) {
        auto spec = ImputerSpec::of(ImputerKind::External, script);
        spec.command = fixture(script);
        spec.timeout_seconds = timeout;
        spec.supports_categorical = true;
        return make_imputer(spec);
    };
    auto filled_with = [&](double number) {
        auto cols = incomplete.columns();
        for (std::size_t j = 0; j < cols.size(); ++j) {
            for (auto& cell : cols[j]) {
                if (is_missing(cell)) {
                    cell = j == 2 ? Cell{Category{2}} : Cell{number};
                }
            }
        }
        return Dataset(schema, std::move(cols));
    };
    auto nudged = [&](double delta) {
        return FunctionImputer("nudge", [&, delta](const Dataset&, std::uint64_t) {
            auto d = filled_with(1.0);
            auto cols = d.columns();
            cols[0][0] = 0.0 + delta;
            return Dataset(schema, std::move(cols));
        });
    };

    struct Case {
        std::string name;
        std::function<RunResult()> run;
        Status expected;
    };
    const auto nudge_below = nudged(1e-6);
    const auto nudge_at = nudged(1.5e-5);
    const auto nudge_above = nudged(1e-3);
    const std::vector<Case> cases{
        {"fill_first.sh", [&] { return run_with_retry(*external("fill_first.sh"), incomplete, 1); }, Status::Success},
        {"copy_input.sh", [&] { return run_with_retry(*external("copy_input.sh"), incomplete, 1); },
         Status::MissingRemained},
        {"bad_label.sh", [&] { return run_with_retry(*external("bad_label.sh"), incomplete, 1); },
         Status::InvalidCategory},
        {"fail.sh", [&] { return run_with_retry(*external("fail.sh"), incomplete, 1); }, Status::ComputationalError},
        {"garbage.sh", [&] { return run_with_retry(*external("garbage.sh"), incomplete, 1); },
         Status::ComputationalError},
        {"sleep.sh", [&] { return run_with_retry(*external("sleep.sh", 0.5), incomplete, 1); }, Status::Timeout},
        {"observed + 1e-6", [&] { return run_with_retry(nudge_below, incomplete, 1); }, Status::Success},
        {"observed + 1.5e-5", [&] { return run_with_retry(nudge_at, incomplete, 1); }, Status::ModifiedObserved},
        {"observed + 1e-3", [&] { return run_with_retry(nudge_above, incomplete, 1); }, Status::ModifiedObserved},
    };
    for (const auto& k : cases) {
        const auto got = k.run().verdict.status;
        c.expect(got == k.expected, k.name + " gave " + std::string(to_string(got)) + ", expected "
                                        + std::string(to_string(k.expected)));
    }
    const auto retried = run_with_retry(*external("fail_even_seed.sh"), incomplete, 2);
    c.expect(retried.verdict.success() && retried.verdict.attempts == 2, "a failing first attempt is retried once");

    // Categorical-format diagnostics.
    const auto capable = run_categorical_diagnostics(*external("fill_first.sh"));
    const auto incapable = run_categorical_diagnostics(*external("fill_half.sh"));
    const auto cart = run_categorical_diagnostics(*make_imputer(ImputerSpec::of(ImputerKind::CartFCS)));
    const auto mean = run_categorical_diagnostics(*make_imputer(ImputerSpec::of(ImputerKind::Mean)));
    c.expect(capable.capable() && cart.capable(), "capable methods pass the diagnostics");
    c.expect(!incapable.capable() && !mean.capable(), "incapable methods fail the diagnostics");
    for (const auto& r : incapable.results) {
        c.expect(r.verdict.status == Status::InvalidCategory,
                 "fill_half.sh in " + std::string(to_string(r.format)) + " is an invalid category");
    }

    // Fuzzed outcomes against the reference classifier.
    auto rng = make_rng(5150);
    std::uniform_int_distribution<int> kind(0, 9);
    std::uniform_int_distribution<std::size_t> rows(1, 8);
    std::bernoulli_distribution coin(0.5);
    std::bernoulli_distribution rarely(0.08);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_int_distribution<std::uint32_t> code(0, 4);
    const double deltas[] = {0.0, 1e-7, 1e-5, 1.4999e-5, 1.5e-5, 2e-5, 0.5};
    std::uniform_int_distribution<std::size_t> delta_pick(0, std::size(deltas) - 1);
    int agree = 0;
    int threw = 0;
    std::set<Status> seen;
    for (int t = 0; t < 1000; ++t) {
        const auto n = rows(rng);
        // Columns: numeric, categorical (3 levels), and a two-column one-hot group.
        Schema s{ColumnSchema::numeric("x"), ColumnSchema::categorical("g", {"p", "q", "r"}),
                 ColumnSchema::numeric("h_1"), ColumnSchema::numeric("h_2")};
        std::vector<Dataset::Column> orig(4), out(4);
        for (std::size_t i = 0; i < n; ++i) {
            const bool hot = coin(rng);
            orig[0].push_back(coin(rng) ? Cell{Missing{}} : Cell{normal(rng)});
            orig[1].push_back(coin(rng) ? Cell{Missing{}} : Cell{Category{1 + static_cast<std::uint32_t>(i % 3)}});
            const bool hole = coin(rng);
            orig[2].push_back(hole ? Cell{Missing{}} : Cell{hot ? 1.0 : 0.0});
            orig[3].push_back(hole ? Cell{Missing{}} : Cell{hot ? 0.0 : 1.0});
        }
        const Dataset original(s, orig);
        const std::vector<OneHotGroup> groups{{"h", {2, 3}}};
        Outcome outcome = Failure{};
        const int k = kind(rng);
        if (k == 0) {
            outcome = Failure{coin(rng) ? Status::Timeout : Status::ComputationalError, "fuzz"};
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                const bool hot = coin(rng);
                for (std::size_t j = 0; j < 4; ++j) {
                    Cell cell = orig[j][i];
                    if (is_missing(cell)) {
                        if (j == 0) {
                            cell = normal(rng);
                        } else if (j == 1) {
                            cell = Category{1 + code(rng) % 3};
                        } else {
                            cell = (j == 2) == hot ? 1.0 : 0.0;
                        }
                    }
                    out[j].push_back(cell);
                }
                if (rarely(rng)) {
                    out[0][i] = Missing{};
                }
                if (rarely(rng)) {
                    out[0][i] = coin(rng) ? std::numeric_limits<double>::infinity() : std::nan("");
                }
                if (rarely(rng) && std::holds_alternative<double>(out[0][i])) {
                    out[0][i] = std::get<double>(out[0][i]) + (coin(rng) ? 1.0 : -1.0) * deltas[delta_pick(rng)];
                }
                if (rarely(rng)) {
                    out[1][i] = Category{code(rng)};
                }
                if (rarely(rng)) {
                    out[2][i] = coin(rng) ? 0.5 : 1.0;
                }
            }
            if (k == 1 && n > 1) {
                for (auto& col : out) {
                    col.pop_back();
                }
            }
            outcome = Dataset(unchecked, s, out);
        }
        const auto expected = classify(original, outcome, groups);
        try {
            const auto got = validate(original, outcome, groups).status;
            seen.insert(got);
            agree += got == expected ? 1 : 0;
        } catch (...) {
            ++threw;
        }
    }
    c.expect(threw == 0, "validate never throws");
    c.expect(agree == 1000, std::to_string(agree) + "/1000 fuzzed verdicts match the reference");
    c.expect(seen.size() == 6, "fuzzing reached all six verdicts");
    c.note(std::to_string(cases.size()) + " fixture cases; diagnostics classify capable/incapable; " + std::to_string(agree)
           + "/1000 fuzzed verdicts agree, " + std::to_string(seen.size()) + " distinct verdicts");
}

// ---------------------------------------------------------------- 6

void ranking_rule(Check& c)
{
    using Scores = std::vector<std::optional<double>>;
    c.expect(rank_scores(Scores{0.1, 0.3, std::nullopt}, Orientation::LowerBetter) == std::vector<double>{1, 2, 3},
             "(0.1, 0.3, fail) ranks (1, 2, 3)");
    c.expect(rank_scores(Scores{0.2, 0.2, 0.5}, Orientation::LowerBetter) == std::vector<double>{1.5, 1.5, 3},
             "ties share the mean position");
    c.expect(rank_scores(Scores{std::nullopt, std::nullopt}, Orientation::LowerBetter) == std::vector<double>{1, 1},
             "all-fail scenarios give rank 1");

    auto rng = make_rng(77);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_int_distribution<int> size(2, 15);
    std::uniform_int_distribution<int> grid(0, 5);
    std::bernoulli_distribution fails(0.25);
    std::bernoulli_distribution discrete(0.5);
    int sum_ok = 0;
    int invariant = 0;
    int monotone = 0;
    for (int t = 0; t < 100; ++t) {
        Scores s(static_cast<std::size_t>(size(rng)));
        const bool on_grid = discrete(rng);
        for (auto& v : s) {
            if (!fails(rng)) {
                v = on_grid ? grid(rng) * 0.1 : normal(rng);
            }
        }
        const auto r = rank_scores(s, Orientation::LowerBetter);
        std::size_t defined = 0;
        double defined_sum = 0.0;
        bool penalty_ok = true;
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (s[k]) {
                ++defined;
                defined_sum += r[k];
            }
        }
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (!s[k]) {
                penalty_ok = penalty_ok && r[k] == static_cast<double>(defined + 1);
            }
        }
        sum_ok += defined_sum == static_cast<double>(defined * (defined + 1)) / 2.0 && penalty_ok ? 1 : 0;

        Scores cubed = s;
        Scores flipped = s;
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (s[k]) {
                cubed[k] = std::exp(3.0 * *s[k]) + 5.0;
                flipped[k] = -2.0 * *s[k];
            }
        }
        invariant += rank_scores(cubed, Orientation::LowerBetter) == r
                             && rank_scores(flipped, Orientation::HigherBetter) == r
                         ? 1
                         : 0;

        // Turning one success into a failure never improves that method's rank.
        bool mono = true;
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (!s[k]) {
                continue;
            }
            Scores worse = s;
            worse[k].reset();
            mono = mono && rank_scores(worse, Orientation::LowerBetter)[k] >= r[k];
        }
        monotone += mono ? 1 : 0;
    }
    c.expect(sum_ok == 100, "rank-sum identity and s + 1 penalty on " + std::to_string(sum_ok) + "/100 sets");
    c.expect(invariant == 100, "monotone-transform invariance on " + std::to_string(invariant) + "/100 sets");
    c.expect(monotone == 100, "failure-penalty monotonicity on " + std::to_string(monotone) + "/100 sets");
    c.note("worked pattern, ties and degenerate case; identities hold on 100/100 fuzzed sets");
}

// ---------------------------------------------------------------- 7

void iscore_calibration(Check& c)
{
    // X1 | X2 ~ N(0.64 x2, 0.6^2) for the bivariate Gaussian generator.
    auto sampler = [](double sd) {
        return FunctionImputer(
            "conditional",
            [sd](const Dataset& in, std::uint64_t seed) {
                auto rng = make_rng(seed);
                std::normal_distribution<double> normal(0.0, 1.0);
                const auto x1 = in.index_of("x1");
                const auto x2 = in.index_of("x2");
                auto cols = in.columns();
                for (std::size_t i = 0; i < in.rows(); ++i) {
                    if (is_missing(cols[x1][i])) {
                        cols[x1][i] = 0.64 * in.number(i, x2) + sd * normal(rng);
                    }
                }
                return Dataset(in.schema(), std::move(cols));
            },
            false, sd == 0.0);
    };
    const auto calibrated = sampler(0.6);
    const auto point = sampler(0.0);
    const auto wide = sampler(1.2);
    std::vector<double> vs_point, vs_wide;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto complete = oracle::bivariate_gaussian(500, 3000 + s);
        const auto incomplete = complete.with_mask(oracle::mcar_column(complete, 0, 0.3, 4000 + s));
        const double good = *energy_iscore(incomplete, calibrated, s).score.value;
        vs_point.push_back(good - *energy_iscore(incomplete, point, s).score.value);
        vs_wide.push_back(good - *energy_iscore(incomplete, wide, s).score.value);
    }
    const double p_point = oracle::paired_t_greater_p(vs_point);
    const double p_wide = oracle::paired_t_greater_p(vs_wide);
    c.expect(p_point < 0.01, "calibrated beats zero-spread (p " + fmt(p_point, 3) + ")");
    c.expect(p_wide < 0.01, "calibrated beats 2x sd (p " + fmt(p_wide, 3) + ")");
    c.note("one-sided paired t-test over 50 seeds: vs zero-spread p " + fmt(p_point, 3) + ", vs 2x sd p "
           + fmt(p_wide, 3));
}

// ---------------------------------------------------------------- 8

struct ScratchDir {
    fs::path path;
    ScratchDir()
    {
        std::string pattern = (fs::temp_directory_path() / "impbench-accept-XXXXXX").string();
        if (::mkdtemp(pattern.data()) == nullptr) {
            throw std::runtime_error("mkdtemp failed");
        }
        path = pattern;
    }
    ~ScratchDir() { fs::remove_all(path); }
};

std::string ranking_line(const RankTable& table)
{
    std::string out;
    for (const auto& m : table.methods) {
        out += (out.empty() ? "" : ", ") + m.method + " " + fmt(m.mean_rank, 3);
    }
    return out;
}

void desk_grid(Check& c)
{
    ScratchDir dir;
    const fs::path data_dir = IMPBENCH_DATA_DIR;
    std::ifstream in(data_dir / "desk_grid.json");
    auto doc = nlohmann::json::parse(in);
    doc["store"] = (dir.path / "desk_grid.jsonl").string();
    const auto cfg = parse_config(doc.dump(), data_dir);
    c.expect(cfg.datasets.size() == 3 && cfg.methods.size() == 10, "grid covers 3 datasets and 10 built-ins");
    const auto summary = run_benchmark(cfg);
    const auto records = load_records(dir.path / "desk_grid.jsonl");
    c.expect(records.size() == summary.scenarios, "every scenario stored");

    const std::set<std::string> fcs{"cart", "pmm"};
    const auto pooled = rank(records, Metric::EnergyDistance);
    const auto numeric = rank(records, Metric::EnergyDistance, "numeric");
    const auto mixed = rank(records, Metric::EnergyDistance, "mixed");
    for (const auto* table : {&pooled, &numeric, &mixed}) {
        c.expect(fcs.contains(table->methods.front().method), "best mean rank is cart or pmm");
    }
    const auto n = numeric.methods.size();
    const std::set<std::string> bottom_numeric{numeric.methods[n - 1].method, numeric.methods[n - 2].method};
    c.expect(bottom_numeric == std::set<std::string>{"zero", "median"}, "zero and median are the bottom two (numeric)");
    // Zero cannot impute categories, so median is the only naive method on mixed data.
    c.expect(mixed.methods.back().method == "median", "median is last (mixed)");
    c.note(std::to_string(records.size()) + " records, " + std::to_string(summary.failures) + " failures");
    c.note("pooled: " + ranking_line(pooled));
    c.note("numeric: " + ranking_line(numeric));
    c.note("mixed: " + ranking_line(mixed));
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        std::string name;
        double limit_seconds;
        std::function<void(Check&)> run;
    };
    const std::vector<Criterion> criteria{
        {1, "metric unit correctness", 5.0, metric_units},
        {2, "imputation is not prediction (RMSE vs energy vs I-Score)", 120.0, imputation_is_not_prediction},
        {3, "slope-bias direction", 60.0, slope_bias},
        {4, "amputation statistics", 60.0, amputation_statistics},
        {5, "validation taxonomy", 120.0, validation_taxonomy},
        {6, "ranking rule", 60.0, ranking_rule},
        {7, "I-Score calibration", 120.0, iscore_calibration},
        {8, "desk-scale grid", 600.0, desk_grid},
    };
    int failed = 0;
    for (const auto& k : criteria) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            k.run(check);
        } catch (const std::exception& e) {
            check.expect(false, std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        check.expect(seconds < k.limit_seconds, "runtime under " + fmt(k.limit_seconds) + " s");
        failed += check.ok ? 0 : 1;
        std::cout << (check.ok ? "[PASS] " : "[FAIL] ") << k.id << ' ' << k.name << " (" << std::fixed
                  << std::setprecision(2) << seconds << " s)" << std::defaultfloat << '\n';
        for (const auto& note : check.notes) {
            std::cout << "       " << note << '\n';
        }
        std::cout.flush();
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << '/' << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
