#include "impbench/errors.hpp"
#include "impbench/ranking.hpp"
#include "impbench/report.hpp"

#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace impbench;
namespace fs = std::filesystem;

namespace {

struct ScratchDir {
    fs::path path;
    ScratchDir()
    {
        std::string pattern = (fs::temp_directory_path() / "impbench-report-XXXXXX").string();
        REQUIRE(::mkdtemp(pattern.data()) != nullptr);
        path = pattern;
    }
    ~ScratchDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<ScenarioRecord> hundred_records(std::size_t timeouts)
{
    std::vector<ScenarioRecord> out;
    for (int rep = 0; rep < 25; ++rep) {
        for (const char* method : {"a", "b", "c", "d"}) {
            ScenarioRecord r;
            r.key = {rep % 2 ? "num" : "mix", method, "MCAR", 0.1, rep};
            r.data_type = rep % 2 ? "numeric" : "mixed";
            r.value = 0.1 * (method[0] - 'a' + 1) + 0.001 * rep;
            r.nrmse = 1.0 - *r.value;
            r.duration_seconds = 0.5;
            out.push_back(r);
        }
    }
    for (std::size_t t = 0; t < timeouts; ++t) {
        out[t * 4].status = Status::Timeout;
        out[t * 4].value.reset();
        out[t * 4].nrmse.reset();
    }
    return out;
}

} // namespace

TEST_CASE("error fractions")
{
    const auto clean = error_fractions(hundred_records(0));
    REQUIRE(clean.size() == 5);
    CHECK(clean.back().method == "all");
    CHECK(clean.back().runs == 100);
    CHECK(clean.back().error_fraction() == 0.0);
    for (const auto& row : clean) {
        CHECK(row.fraction(Status::Success) == 1.0);
    }

    const auto one = error_fractions(hundred_records(1));
    CHECK(one.back().fraction(Status::Timeout) == doctest::Approx(0.01));
    CHECK(one.back().error_fraction() == doctest::Approx(0.01));
    CHECK(one.front().method == "a");
    CHECK(one.front().fraction(Status::Timeout) == doctest::Approx(0.04));
    CHECK(one[1].error_fraction() == 0.0);
}

TEST_CASE("report files")
{
    ScratchDir dir;
    const auto records = hundred_records(1);
    write_report(records, dir.path / "out");
    for (const char* name :
         {"ranks_long.csv", "rank_summary.csv", "topk.csv", "error_fractions.csv", "runtime.csv", "summary.json"}) {
        CHECK(fs::exists(dir.path / "out" / name));
    }
    const auto summary = nlohmann::json::parse(slurp(dir.path / "out" / "summary.json"));
    CHECK(summary.at("records") == 100);
    CHECK(summary.at("degenerate_scenarios").empty());
    CHECK(summary.at("undefined_scores").empty());
    CHECK(summary.at("rank_tables").contains("energy"));

    const auto rank_summary = slurp(dir.path / "out" / "rank_summary.csv");
    CHECK(rank_summary.find("energy,pooled,1,a,") != std::string::npos);
    CHECK(rank_summary.find("energy,numeric,") != std::string::npos);
    CHECK(rank_summary.find("energy,mixed,") != std::string::npos);
    CHECK(rank_summary.find("nrmse,pooled,1,d,") != std::string::npos);
    CHECK(rank_summary.find("mpe") == std::string::npos);

    // 25 scenarios x 4 methods per ranked metric, pooled scope only.
    const auto long_csv = slurp(dir.path / "out" / "ranks_long.csv");
    CHECK(std::count(long_csv.begin(), long_csv.end(), '\n') == 1 + 2 * 100);

    CHECK(slurp(dir.path / "out" / "error_fractions.csv").find("all,100,") != std::string::npos);

    // Same records, same bytes.
    write_report(records, dir.path / "again");
    for (const char* name : {"ranks_long.csv", "rank_summary.csv", "topk.csv", "error_fractions.csv", "summary.json"}) {
        CHECK(slurp(dir.path / "out" / name) == slurp(dir.path / "again" / name));
    }
    CHECK_THROWS_AS(write_report(std::vector<ScenarioRecord>{}, dir.path / "empty"), Error);
}

TEST_CASE("degenerate and undefined scenarios are listed")
{
    ScratchDir dir;
    std::vector<ScenarioRecord> records(3);
    records[0].key = {"d", "a", "MCAR", 0.1, 0};
    records[0].status = Status::Timeout;
    records[1].key = {"d", "b", "MCAR", 0.1, 0};
    records[1].status = Status::MissingRemained;
    records[2].key = {"r", "a", "real", 0.2, 0};
    records[2].metric = Metric::EnergyIScore;
    records[2].orientation = Orientation::HigherBetter;
    for (auto& r : records) {
        r.data_type = "numeric";
    }
    write_report(records, dir.path);
    const auto summary = nlohmann::json::parse(slurp(dir.path / "summary.json"));
    // Listed once for energy and once for the NRMSE riding on the same records.
    CHECK(summary.at("degenerate_scenarios").size() == 2);
    CHECK(summary.at("undefined_scores").size() == 1);
}

TEST_CASE("terminal table")
{
    const auto records = hundred_records(0);
    const auto text = format_rank_table(rank(records, Metric::EnergyDistance));
    CHECK(text.find("\na ") < text.find("\nd "));
    CHECK(text.find("1.000") != std::string::npos);
}
