#include "impbench/records.hpp"

#include "impbench/csv.hpp"
#include "impbench/errors.hpp"

#include <json.hpp>

namespace impbench {

namespace {

using nlohmann::ordered_json;

ordered_json optional_number(const std::optional<double>& v)
{
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<double> read_optional(const ordered_json& obj, const char* key)
{
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        return std::nullopt;
    }
    return it->get<double>();
}

ordered_json key_json(const ScenarioKey& key)
{
    ordered_json j;
    j["dataset"] = key.dataset;
    j["method"] = key.method;
    j["mechanism"] = key.mechanism;
    j["proportion"] = key.proportion;
    j["replicate"] = key.replicate;
    return j;
}

ScenarioKey key_from(const ordered_json& j)
{
    return ScenarioKey{j.at("dataset").get<std::string>(), j.at("method").get<std::string>(),
                       j.at("mechanism").get<std::string>(), j.at("proportion").get<double>(),
                       j.at("replicate").get<int>()};
}

ordered_json parse_line(std::string_view line)
{
    try {
        return ordered_json::parse(line);
    } catch (const ordered_json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("malformed record: ") + e.what());
    }
}

} // namespace

std::string ScenarioKey::str() const
{
    return dataset + "|" + method + "|" + mechanism + "|" + format_double(proportion) + "|" + std::to_string(replicate);
}

std::optional<double> ScenarioRecord::value_of(Metric m) const
{
    if (m == metric) {
        return value;
    }
    if (m == Metric::NRMSE) {
        return nrmse;
    }
    if (m == Metric::MPE) {
        return mpe;
    }
    return std::nullopt;
}

std::string record_to_json(const ScenarioRecord& r)
{
    ordered_json j;
    j["dataset"] = r.key.dataset;
    j["data_type"] = r.data_type;
    j["method"] = r.key.method;
    j["mechanism"] = r.key.mechanism;
    j["proportion"] = r.key.proportion;
    j["replicate"] = r.key.replicate;
    j["metric"] = to_string(r.metric);
    j["value"] = optional_number(r.value);
    j["orientation"] = to_string(r.orientation);
    j["verdict"] = to_string(r.status);
    j["detail"] = r.detail;
    j["attempts"] = r.attempts;
    j["nrmse"] = optional_number(r.nrmse);
    j["mpe"] = optional_number(r.mpe);
    return j.dump();
}

ScenarioRecord record_from_json(std::string_view line)
{
    const auto j = parse_line(line);
    try {
        ScenarioRecord r;
        r.key = key_from(j);
        r.data_type = j.value("data_type", "numeric");
        r.metric = parse_metric(j.at("metric").get<std::string>());
        r.value = read_optional(j, "value");
        r.orientation = parse_orientation(j.at("orientation").get<std::string>());
        r.status = parse_status(j.at("verdict").get<std::string>());
        r.detail = j.value("detail", "");
        r.attempts = j.value("attempts", 1);
        r.nrmse = read_optional(j, "nrmse");
        r.mpe = read_optional(j, "mpe");
        return r;
    } catch (const ordered_json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("malformed record: ") + e.what());
    }
}

std::string timing_to_json(const ScenarioRecord& r)
{
    auto j = key_json(r.key);
    j["duration"] = r.duration_seconds;
    return j.dump();
}

std::pair<ScenarioKey, double> timing_from_json(std::string_view line)
{
    const auto j = parse_line(line);
    try {
        return {key_from(j), j.at("duration").get<double>()};
    } catch (const ordered_json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("malformed timing line: ") + e.what());
    }
}

} // namespace impbench
