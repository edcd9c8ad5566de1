#pragma once

#include "impbench/records.hpp"

#include <filesystem>
#include <fstream>
#include <mutex>
#include <unordered_set>
#include <vector>

namespace impbench {

// Timing lines live next to the store in "<store>.timing.jsonl".
std::filesystem::path timing_path(const std::filesystem::path& store);

// Append-only JSON-lines result store. Each record is written as one line and
// flushed; on resume a trailing partial line left by a crash is cut off and
// completed scenarios are remembered so they can be skipped.
class ResultStore {
public:
    // Without `resume`, an existing non-empty store is an error.
    ResultStore(const std::filesystem::path& path, bool resume);

    [[nodiscard]] bool contains(const ScenarioKey& key) const;
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }

    void append(const ScenarioRecord& record);

private:
    std::filesystem::path path_;
    std::ofstream records_;
    std::ofstream timings_;
    std::unordered_set<std::string> done_;
    mutable std::mutex mutex_;
};

// Reads every complete line of a store, attaching durations from the timing
// file when present. A trailing partial line is ignored.
std::vector<ScenarioRecord> load_records(const std::filesystem::path& path);

} // namespace impbench
