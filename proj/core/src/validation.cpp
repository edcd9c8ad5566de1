#include "impbench/validation.hpp"

#include "impbench/csv.hpp"

#include <chrono>
#include <cmath>

namespace impbench {

namespace {

constexpr std::pair<Status, std::string_view> kStatusNames[] = {
    {Status::Success, "success"},
    {Status::ModifiedObserved, "modified_observed"},
    {Status::MissingRemained, "missing_remained"},
    {Status::ComputationalError, "computational_error"},
    {Status::Timeout, "timeout"},
    {Status::InvalidCategory, "invalid_category"},
};

std::string cell_name(const Dataset& data, std::size_t i, std::size_t j)
{
    return "row " + std::to_string(i + 1) + ", column '" + data.column_schema(j).name + "'";
}

bool is_non_finite(const Cell& c)
{
    const auto* v = std::get_if<double>(&c);
    return v && !std::isfinite(*v);
}

std::string count_detail(std::size_t count, std::string_view what, const std::string& first)
{
    return std::to_string(count) + " " + std::string(what) + " (first at " + first + ")";
}

Verdict check(const Dataset& original, const Dataset& result, std::span<const OneHotGroup> one_hot)
{
    if (result.rows() != original.rows() || result.cols() != original.cols()) {
        return {Status::ComputationalError, "result shape differs from the input", 1};
    }

    std::size_t missing = 0;
    std::string first;
    for (std::size_t j = 0; j < result.cols(); ++j) {
        for (std::size_t i = 0; i < result.rows(); ++i) {
            const auto& c = result.at(i, j);
            if (is_missing(c) || is_non_finite(c)) {
                if (missing++ == 0) {
                    first = cell_name(result, i, j);
                }
            }
        }
    }
    if (missing > 0) {
        return {Status::MissingRemained, count_detail(missing, "cells still missing", first), 1};
    }

    std::size_t modified = 0;
    double worst = 0.0;
    for (std::size_t j = 0; j < result.cols(); ++j) {
        for (std::size_t i = 0; i < result.rows(); ++i) {
            const auto& before = original.at(i, j);
            if (is_missing(before)) {
                continue;
            }
            const auto& after = result.at(i, j);
            bool changed = false;
            if (const auto* b = std::get_if<double>(&before)) {
                const auto* a = std::get_if<double>(&after);
                const double delta = a ? std::abs(*a - *b) : INFINITY;
                changed = !(delta < kObservedTolerance);
                if (changed && !(delta <= worst)) {
                    worst = delta;
                }
            } else {
                changed = before != after;
            }
            if (changed && modified++ == 0) {
                first = cell_name(result, i, j);
            }
        }
    }
    if (modified > 0) {
        auto detail = count_detail(modified, "observed cells modified", first);
        if (worst > 0.0) {
            detail += ", max numeric change " + format_double(worst);
        }
        return {Status::ModifiedObserved, detail, 1};
    }

    std::size_t invalid = 0;
    for (std::size_t j = 0; j < result.cols(); ++j) {
        const auto& col = result.column_schema(j);
        for (std::size_t i = 0; i < result.rows(); ++i) {
            const auto& c = result.at(i, j);
            bool bad = false;
            if (const auto* cat = std::get_if<Category>(&c)) {
                bad = !col.is_categorical() || cat->code == 0 || cat->code > col.levels();
            } else if (std::holds_alternative<double>(c)) {
                bad = col.is_categorical();
            }
            if (bad && invalid++ == 0) {
                first = cell_name(result, i, j);
            }
        }
    }
    for (const auto& group : one_hot) {
        for (std::size_t i = 0; i < result.rows(); ++i) {
            int active = 0;
            bool binary = true;
            for (auto j : group.columns) {
                const auto* v = j < result.cols() ? std::get_if<double>(&result.at(i, j)) : nullptr;
                if (!v || (*v != 0.0 && *v != 1.0)) {
                    binary = false;
                } else if (*v == 1.0) {
                    ++active;
                }
            }
            if ((!binary || active != 1) && invalid++ == 0) {
                first = "row " + std::to_string(i + 1) + ", one-hot group '" + group.name + "'";
            }
        }
    }
    if (invalid > 0) {
        return {Status::InvalidCategory, count_detail(invalid, "invalid category values", first), 1};
    }
    return {Status::Success, {}, 1};
}

} // namespace

std::string_view to_string(Status status) noexcept
{
    for (const auto& [s, name] : kStatusNames) {
        if (s == status) {
            return name;
        }
    }
    return "unknown";
}

Status parse_status(std::string_view s)
{
    for (const auto& [status, name] : kStatusNames) {
        if (name == s) {
            return status;
        }
    }
    throw Error(ErrorCode::Parse, "unknown status '" + std::string(s) + "'");
}

Verdict validate(const Dataset& original, const Outcome& outcome, std::span<const OneHotGroup> one_hot)
{
    if (const auto* f = std::get_if<Failure>(&outcome)) {
        return {f->status, f->message, 1};
    }
    try {
        return check(original, std::get<Dataset>(outcome), one_hot);
    } catch (const std::exception& e) {
        return {Status::ComputationalError, std::string("validation failed: ") + e.what(), 1};
    }
}

Failure failure_from(const std::exception& e)
{
    if (const auto* err = dynamic_cast<const Error*>(&e); err && err->code() == ErrorCode::Timeout) {
        return {Status::Timeout, e.what()};
    }
    return {Status::ComputationalError, e.what()};
}

RunResult attempt(const Imputer& imputer, const Dataset& incomplete, std::uint64_t seed, double timeout_seconds,
                  std::span<const OneHotGroup> one_hot)
{
    const auto start = std::chrono::steady_clock::now();
    RunResult r{Failure{}, {}, 0.0};
    try {
        r.outcome = imputer.run(incomplete, seed);
    } catch (const std::exception& e) {
        r.outcome = failure_from(e);
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    r.duration_seconds = elapsed.count();
    if (timeout_seconds > 0.0 && imputer.enforced_timeout() <= 0.0 && r.duration_seconds > timeout_seconds
        && std::holds_alternative<Dataset>(r.outcome)) {
        r.outcome = Failure{Status::Timeout, "finished after " + format_double(r.duration_seconds) + " s, limit "
                                                 + format_double(timeout_seconds) + " s"};
    }
    r.verdict = validate(incomplete, r.outcome, one_hot);
    return r;
}

RunResult run_with_retry(const Imputer& imputer, const Dataset& incomplete, std::uint64_t seed,
                         const RetryOptions& options, std::span<const OneHotGroup> one_hot)
{
    auto first = attempt(imputer, incomplete, seed, options.timeout_seconds, one_hot);
    if (first.verdict.status != Status::ComputationalError || !std::holds_alternative<Failure>(first.outcome)) {
        return first;
    }
    auto second = attempt(imputer, incomplete, seed + options.seed_offset, options.timeout_seconds, one_hot);
    second.verdict.attempts = 2;
    return second;
}

} // namespace impbench
