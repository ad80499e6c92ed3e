#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace miner {

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;
    bool ok() const { return exit_code == 0; }
};

struct CommandOptions {
    std::filesystem::path cwd;                   // empty = inherit
    std::map<std::string, std::string> env;      // additions/overrides
    std::string stdin_data;
};

/// Runs argv[0] with the given arguments and captures stdout/stderr.
/// Throws miner::Error when the process cannot be spawned; a nonzero exit
/// is reported through the result, not an exception.
CommandResult run_command(const std::vector<std::string>& argv,
                          const CommandOptions& opts = {});

/// A long-lived child process with pipes on stdin/stdout, for batch-style
/// protocols. stderr is inherited.
class PipeProcess {
public:
    PipeProcess(const std::vector<std::string>& argv, const CommandOptions& opts = {});
    ~PipeProcess();

    PipeProcess(const PipeProcess&) = delete;
    PipeProcess& operator=(const PipeProcess&) = delete;

    void write(std::string_view data);
    /// Reads until '\n' (consumed, not returned). Returns false on EOF.
    bool read_line(std::string& line);
    /// Reads exactly n bytes.
    std::string read_exact(std::size_t n);
    void close_stdin();
    /// Waits for exit; returns the exit code.
    int wait();

private:
    void fill_buffer();

    int pid_ = -1;
    int in_fd_ = -1;  // child's stdin (we write)
    int out_fd_ = -1; // child's stdout (we read)
    std::string buf_;
    std::size_t buf_pos_ = 0;
    bool eof_ = false;
    int exit_code_ = -1;
    bool waited_ = false;
};

} // namespace miner
