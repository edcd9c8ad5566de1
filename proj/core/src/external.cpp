#include "impbench/csv.hpp"
#include "impbench/errors.hpp"
#include "impbench/imputers.hpp"

#include <cerrno>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <signal.h>
#include <stdlib.h>
#include <sys/wait.h>
#include <unistd.h>

namespace impbench {

namespace {

namespace fs = std::filesystem;

class TempDir {
public:
    TempDir()
    {
        std::string pattern = (fs::temp_directory_path() / "impbench-XXXXXX").string();
        if (::mkdtemp(pattern.data()) == nullptr) {
            throw Error(ErrorCode::Io, std::string("mkdtemp failed: ") + std::strerror(errno));
        }
        path_ = pattern;
    }
    ~TempDir()
    {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] const fs::path& path() const noexcept { return path_; }

private:
    fs::path path_;
};

std::string tail_of(const fs::path& log)
{
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    auto text = ss.str();
    constexpr std::size_t keep = 400;
    if (text.size() > keep) {
        text = "..." + text.substr(text.size() - keep);
    }
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) {
        text.pop_back();
    }
    return text;
}

enum class ExitKind { Exited, Signaled, TimedOut };

struct ChildExit {
    ExitKind kind;
    int code;
};

ChildExit run_child(std::vector<std::string> args, const fs::path& log, double timeout_seconds)
{
    std::vector<char*> argv;
    for (auto& a : args) {
        argv.push_back(a.data());
    }
    argv.push_back(nullptr);
    const std::string log_path = log.string();

    const pid_t pid = ::fork();
    if (pid < 0) {
        throw Error(ErrorCode::Computational, std::string("fork failed: ") + std::strerror(errno));
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        const int fd = ::open(log_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
        if (fd >= 0) {
            ::dup2(fd, STDOUT_FILENO);
            ::dup2(fd, STDERR_FILENO);
            ::close(fd);
        }
        const int null_fd = ::open("/dev/null", O_RDONLY);
        if (null_fd >= 0) {
            ::dup2(null_fd, STDIN_FILENO);
            ::close(null_fd);
        }
        ::execv(argv[0], argv.data());
        ::_exit(127);
    }
    // Also set from the parent so the kill below cannot race the child's setpgid.
    ::setpgid(pid, pid);

    const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_seconds);
    auto pause = std::chrono::milliseconds(1);
    for (;;) {
        int status = 0;
        const pid_t r = ::waitpid(pid, &status, WNOHANG);
        if (r == pid) {
            if (WIFEXITED(status)) {
                return {ExitKind::Exited, WEXITSTATUS(status)};
            }
            return {ExitKind::Signaled, WIFSIGNALED(status) ? WTERMSIG(status) : -1};
        }
        if (r < 0 && errno != EINTR) {
            throw Error(ErrorCode::Computational, std::string("waitpid failed: ") + std::strerror(errno));
        }
        if (timeout_seconds > 0.0 && std::chrono::steady_clock::now() >= deadline) {
            ::kill(-pid, SIGKILL);
            ::kill(pid, SIGKILL);
            ::waitpid(pid, &status, 0);
            return {ExitKind::TimedOut, 0};
        }
        std::this_thread::sleep_for(pause);
        pause = std::min(pause * 2, std::chrono::milliseconds(20));
    }
}

} // namespace

Dataset impute_external(const Dataset& incomplete, const ExternalOptions& options, std::uint64_t seed)
{
    if (options.command.empty()) {
        throw Error(ErrorCode::Config, "external imputer has no command");
    }
    TempDir dir;
    const auto in_path = dir.path() / "in.csv";
    const auto out_path = dir.path() / "out.csv";
    const auto log_path = dir.path() / "log.txt";
    save_csv(in_path, incomplete, options.na_token);

    // The command string is shell syntax; the paths and seed arrive as
    // positional parameters so they need no quoting.
    const auto exit = run_child({"/bin/sh", "-c", options.command + " \"$@\"", "impbench", in_path.string(),
                                 out_path.string(), std::to_string(seed)},
                                log_path, options.timeout_seconds);
    if (exit.kind == ExitKind::TimedOut) {
        throw Error(ErrorCode::Timeout, "'" + options.command + "' exceeded " + format_double(options.timeout_seconds)
                                            + " s");
    }
    if (exit.kind == ExitKind::Signaled) {
        throw Error(ErrorCode::Computational, "'" + options.command + "' killed by signal " + std::to_string(exit.code)
                                                  + ": " + tail_of(log_path));
    }
    if (exit.code != 0) {
        throw Error(ErrorCode::Computational, "'" + options.command + "' exited with status "
                                                  + std::to_string(exit.code) + ": " + tail_of(log_path));
    }

    std::ifstream out(out_path);
    if (!out) {
        throw Error(ErrorCode::Computational, "'" + options.command + "' wrote no output file");
    }
    CsvReadOptions read;
    read.na_token = options.na_token;
    read.lenient_categories = true;
    read.reject_degenerate = false;
    read.quiet = true;
    try {
        Dataset result = read_csv(out, incomplete.schema(), read);
        if (result.rows() != incomplete.rows()) {
            throw Error(ErrorCode::SchemaMismatch, "expected " + std::to_string(incomplete.rows()) + " rows, got "
                                                       + std::to_string(result.rows()));
        }
        return result;
    } catch (const Error& e) {
        throw Error(ErrorCode::Computational, "malformed output: " + std::string(e.what()));
    }
}

} // namespace impbench
