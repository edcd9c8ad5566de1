#include "impbench/store.hpp"

#include "impbench/errors.hpp"

#include <unordered_map>

namespace impbench {

namespace fs = std::filesystem;

namespace {

// Complete lines of a file; a final line without '\n' is a crash leftover.
std::vector<std::string> complete_lines(const fs::path& path, std::uintmax_t* complete_bytes = nullptr)
{
    std::vector<std::string> lines;
    std::ifstream in(path, std::ios::binary);
    std::uintmax_t bytes = 0;
    std::string buffer;
    char c = 0;
    while (in.get(c)) {
        if (c == '\n') {
            bytes += buffer.size() + 1;
            if (!buffer.empty()) {
                lines.push_back(std::move(buffer));
            }
            buffer.clear();
        } else {
            buffer.push_back(c);
        }
    }
    if (complete_bytes) {
        *complete_bytes = bytes;
    }
    return lines;
}

void truncate_partial(const fs::path& path)
{
    if (!fs::exists(path)) {
        return;
    }
    std::uintmax_t bytes = 0;
    complete_lines(path, &bytes);
    if (fs::file_size(path) != bytes) {
        fs::resize_file(path, bytes);
    }
}

std::ofstream open_append(const fs::path& path)
{
    std::ofstream out(path, std::ios::app | std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot open " + path.string() + " for appending");
    }
    return out;
}

} // namespace

fs::path timing_path(const fs::path& store)
{
    return fs::path(store.string() + ".timing.jsonl");
}

ResultStore::ResultStore(const fs::path& path, bool resume)
    : path_(path)
{
    const bool exists = fs::exists(path) && fs::file_size(path) > 0;
    if (exists && !resume) {
        throw Error(ErrorCode::Io, "result store " + path.string() + " already exists; pass --resume to continue it");
    }
    if (!path.parent_path().empty()) {
        fs::create_directories(path.parent_path());
    }
    if (resume) {
        truncate_partial(path);
        truncate_partial(timing_path(path));
        for (const auto& line : complete_lines(path)) {
            done_.insert(record_from_json(line).key.str());
        }
    } else {
        std::ofstream(timing_path(path), std::ios::trunc);
    }
    records_ = open_append(path);
    timings_ = open_append(timing_path(path));
}

bool ResultStore::contains(const ScenarioKey& key) const
{
    std::lock_guard lock(mutex_);
    return done_.contains(key.str());
}

std::size_t ResultStore::size() const
{
    std::lock_guard lock(mutex_);
    return done_.size();
}

void ResultStore::append(const ScenarioRecord& record)
{
    std::lock_guard lock(mutex_);
    records_ << record_to_json(record) << '\n';
    records_.flush();
    timings_ << timing_to_json(record) << '\n';
    timings_.flush();
    if (!records_ || !timings_) {
        throw Error(ErrorCode::Io, "failed writing to " + path_.string());
    }
    done_.insert(record.key.str());
}

std::vector<ScenarioRecord> load_records(const fs::path& path)
{
    if (!fs::exists(path)) {
        throw Error(ErrorCode::Io, "result store " + path.string() + " does not exist");
    }
    std::unordered_map<std::string, double> durations;
    if (fs::exists(timing_path(path))) {
        for (const auto& line : complete_lines(timing_path(path))) {
            const auto [key, duration] = timing_from_json(line);
            durations[key.str()] = duration;
        }
    }
    std::vector<ScenarioRecord> records;
    for (const auto& line : complete_lines(path)) {
        auto r = record_from_json(line);
        if (const auto it = durations.find(r.key.str()); it != durations.end()) {
            r.duration_seconds = it->second;
        }
        records.push_back(std::move(r));
    }
    return records;
}

} // namespace impbench
