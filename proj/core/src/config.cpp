#include "impbench/config.hpp"

#include "impbench/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace impbench {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

fs::path resolve(const fs::path& base, const std::string& p)
{
    fs::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback)
{
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        return fallback;
    }
    try {
        return it->get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Config, std::string("field '") + key + "': " + e.what());
    }
}

ImputerSpec parse_method(const json& m)
{
    if (m.is_string()) {
        return ImputerSpec::of(parse_imputer_kind(m.get<std::string>()));
    }
    if (!m.is_object() || !m.contains("kind")) {
        throw Error(ErrorCode::Config, "method entries need a 'kind'");
    }
    auto spec = ImputerSpec::of(parse_imputer_kind(m.at("kind").get<std::string>()), get_or<std::string>(m, "name", ""));
    const json hp = m.value("hyperparams", json::object());
    spec.k = get_or<std::size_t>(hp, "k", spec.k);
    spec.donors = get_or<std::size_t>(hp, "donors", spec.donors);
    spec.iterations = get_or<int>(hp, "iterations", spec.iterations);
    spec.min_leaf = get_or<std::size_t>(hp, "min_leaf", spec.min_leaf);
    spec.command = get_or<std::string>(m, "command", get_or<std::string>(hp, "command", ""));
    spec.supports_categorical = get_or<bool>(m, "supports_categorical", spec.supports_categorical);
    if (spec.kind != ImputerKind::External && spec.supports_categorical && !kind_supports_categorical(spec.kind)) {
        throw Error(ErrorCode::Config, "method '" + spec.name + "' cannot impute categorical data");
    }
    // Validates the hyperparameters.
    (void)make_imputer(spec);
    return spec;
}

} // namespace

std::string_view to_string(MetricMode mode) noexcept
{
    return mode == MetricMode::Energy ? "energy" : "iscore";
}

std::vector<ImputerSpec> builtin_methods()
{
    std::vector<ImputerSpec> out;
    for (auto kind : {ImputerKind::Mean, ImputerKind::Median, ImputerKind::Zero, ImputerKind::Random, ImputerKind::KNN,
                      ImputerKind::Norm, ImputerKind::NormNob, ImputerKind::NormPredict, ImputerKind::PMM,
                      ImputerKind::CartFCS}) {
        out.push_back(ImputerSpec::of(kind));
    }
    return out;
}

std::optional<std::uint64_t> seed_from_environment()
{
    const char* raw = std::getenv("IMPBENCH_SEED");
    if (raw == nullptr || *raw == '\0') {
        return std::nullopt;
    }
    const std::string_view s(raw);
    std::uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error(ErrorCode::Config, "IMPBENCH_SEED must be an unsigned integer, got '" + std::string(s) + "'");
    }
    return seed;
}

BenchmarkConfig parse_config(std::string_view json_text, const fs::path& base_dir)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Config, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw Error(ErrorCode::Config, "config must be a JSON object");
    }

    BenchmarkConfig cfg;
    cfg.seed = get_or<std::uint64_t>(doc, "seed", cfg.seed);
    cfg.replicates = get_or<int>(doc, "replicates", cfg.replicates);
    cfg.timeout_seconds = get_or<double>(doc, "timeout_seconds", cfg.timeout_seconds);
    cfg.jobs = get_or<std::size_t>(doc, "jobs", cfg.jobs);
    cfg.iscore_draws = get_or<int>(doc, "iscore_draws", cfg.iscore_draws);
    cfg.store = resolve(base_dir, get_or<std::string>(doc, "store", cfg.store.string()));
    cfg.proportions = get_or<std::vector<double>>(doc, "proportions", cfg.proportions);
    if (doc.contains("mechanisms")) {
        cfg.mechanisms.clear();
        for (const auto& m : doc.at("mechanisms")) {
            cfg.mechanisms.push_back(parse_mechanism(m.get<std::string>()));
        }
    }

    if (!doc.contains("datasets") || !doc.at("datasets").is_array() || doc.at("datasets").empty()) {
        throw Error(ErrorCode::Config, "config needs a non-empty 'datasets' array");
    }
    std::set<std::string> ids;
    for (const auto& d : doc.at("datasets")) {
        DatasetEntry e;
        e.id = get_or<std::string>(d, "id", "");
        const auto path = get_or<std::string>(d, "path", "");
        if (e.id.empty() || path.empty()) {
            throw Error(ErrorCode::Config, "datasets need 'id' and 'path'");
        }
        if (!ids.insert(e.id).second) {
            throw Error(ErrorCode::Config, "duplicate dataset id '" + e.id + "'");
        }
        e.path = resolve(base_dir, path);
        auto schema = get_or<std::string>(d, "schema", "");
        e.schema = schema.empty() ? fs::path(e.path).replace_extension(".schema.json") : resolve(base_dir, schema);
        const auto mode = get_or<std::string>(d, "metric", "energy");
        if (mode == "energy") {
            e.mode = MetricMode::Energy;
        } else if (mode == "iscore") {
            e.mode = MetricMode::IScore;
        } else {
            throw Error(ErrorCode::Config, "dataset '" + e.id + "': metric must be 'energy' or 'iscore'");
        }
        cfg.datasets.push_back(std::move(e));
    }

    if (!doc.contains("methods") || !doc.at("methods").is_array() || doc.at("methods").empty()) {
        throw Error(ErrorCode::Config, "config needs a non-empty 'methods' array");
    }
    std::set<std::string> names;
    for (const auto& m : doc.at("methods")) {
        std::vector<ImputerSpec> specs;
        if (m.is_string() && m.get<std::string>() == "builtin") {
            specs = builtin_methods();
        } else {
            specs.push_back(parse_method(m));
        }
        for (auto& s : specs) {
            if (!names.insert(s.name).second) {
                throw Error(ErrorCode::Config, "duplicate method name '" + s.name + "'");
            }
            s.timeout_seconds = cfg.timeout_seconds;
            cfg.methods.push_back(std::move(s));
        }
    }

    if (cfg.replicates < 1) {
        throw Error(ErrorCode::Config, "replicates must be at least 1");
    }
    if (cfg.jobs < 1) {
        throw Error(ErrorCode::Config, "jobs must be at least 1");
    }
    if (cfg.iscore_draws < 2) {
        throw Error(ErrorCode::Config, "iscore_draws must be at least 2");
    }
    if (!(cfg.timeout_seconds > 0.0)) {
        throw Error(ErrorCode::Config, "timeout_seconds must be positive");
    }
    if (cfg.mechanisms.empty() || cfg.proportions.empty()) {
        throw Error(ErrorCode::Config, "mechanisms and proportions must be non-empty");
    }
    for (double p : cfg.proportions) {
        if (!(p > 0.0 && p < 1.0)) {
            throw Error(ErrorCode::Config, "proportions must lie in (0, 1)");
        }
    }
    return cfg;
}

BenchmarkConfig load_config(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open config " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    auto cfg = parse_config(ss.str(), path.parent_path());
    if (const auto seed = seed_from_environment()) {
        cfg.seed = *seed;
    }
    return cfg;
}

} // namespace impbench
