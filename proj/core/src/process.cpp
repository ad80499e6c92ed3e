#include "miner/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "miner/errors.hpp"

namespace miner {

namespace {

struct Pipe {
    int fds[2] = {-1, -1};
    Pipe() {
        if (pipe(fds) != 0) throw Error(std::string("pipe: ") + std::strerror(errno));
    }
    ~Pipe() {
        close_read();
        close_write();
    }
    void close_read() {
        if (fds[0] >= 0) ::close(fds[0]);
        fds[0] = -1;
    }
    void close_write() {
        if (fds[1] >= 0) ::close(fds[1]);
        fds[1] = -1;
    }
    int take_read() { int f = fds[0]; fds[0] = -1; return f; }
    int take_write() { int f = fds[1]; fds[1] = -1; return f; }
};

[[noreturn]] void exec_child(const std::vector<std::string>& argv, const CommandOptions& opts,
                             int in_fd, int out_fd, int err_fd) {
    if (!opts.cwd.empty() && chdir(opts.cwd.c_str()) != 0) _exit(127);
    for (const auto& [k, v] : opts.env) setenv(k.c_str(), v.c_str(), 1);
    if (in_fd >= 0) dup2(in_fd, 0);
    if (out_fd >= 0) dup2(out_fd, 1);
    if (err_fd >= 0) dup2(err_fd, 2);
    // Close everything above the stdio triple so pipes don't leak into git.
    for (int fd = 3; fd < 256; ++fd) ::close(fd);

    std::vector<char*> cargv;
    cargv.reserve(argv.size() + 1);
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    execvp(cargv[0], cargv.data());
    _exit(127);
}

int wait_exit_code(int pid) {
    int status = 0;
    while (waitpid(pid, &status, 0) < 0) {
        if (errno != EINTR) throw Error(std::string("waitpid: ") + std::strerror(errno));
    }
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
    return -1;
}

} // namespace

CommandResult run_command(const std::vector<std::string>& argv, const CommandOptions& opts) {
    if (argv.empty()) throw Error("run_command: empty argv");
    signal(SIGPIPE, SIG_IGN);

    Pipe in, out, err;
    const int pid = fork();
    if (pid < 0) throw Error(std::string("fork: ") + std::strerror(errno));
    if (pid == 0) {
        in.close_write();
        out.close_read();
        err.close_read();
        exec_child(argv, opts, in.fds[0], out.fds[1], err.fds[1]);
    }
    in.close_read();
    out.close_write();
    err.close_write();

    CommandResult result;
    std::size_t written = 0;
    bool stdin_open = true;
    if (opts.stdin_data.empty()) {
        in.close_write();
        stdin_open = false;
    }

    char buf[65536];
    while (true) {
        pollfd fds[3];
        nfds_t n = 0;
        int out_i = -1, err_i = -1, in_i = -1;
        if (out.fds[0] >= 0) { fds[n] = {out.fds[0], POLLIN, 0}; out_i = (int)n++; }
        if (err.fds[0] >= 0) { fds[n] = {err.fds[0], POLLIN, 0}; err_i = (int)n++; }
        if (stdin_open) { fds[n] = {in.fds[1], POLLOUT, 0}; in_i = (int)n++; }
        if (n == 0) break;
        if (poll(fds, n, -1) < 0) {
            if (errno == EINTR) continue;
            throw Error(std::string("poll: ") + std::strerror(errno));
        }
        if (out_i >= 0 && (fds[out_i].revents & (POLLIN | POLLHUP))) {
            ssize_t r = read(out.fds[0], buf, sizeof buf);
            if (r > 0) result.out.append(buf, static_cast<std::size_t>(r));
            else out.close_read();
        }
        if (err_i >= 0 && (fds[err_i].revents & (POLLIN | POLLHUP))) {
            ssize_t r = read(err.fds[0], buf, sizeof buf);
            if (r > 0) result.err.append(buf, static_cast<std::size_t>(r));
            else err.close_read();
        }
        if (in_i >= 0 && (fds[in_i].revents & (POLLOUT | POLLERR | POLLHUP))) {
            if (fds[in_i].revents & (POLLERR | POLLHUP)) {
                in.close_write();
                stdin_open = false;
            } else {
                ssize_t w = ::write(in.fds[1], opts.stdin_data.data() + written,
                                    opts.stdin_data.size() - written);
                if (w > 0) written += static_cast<std::size_t>(w);
                if (w < 0 || written == opts.stdin_data.size()) {
                    in.close_write();
                    stdin_open = false;
                }
            }
        }
    }
    result.exit_code = wait_exit_code(pid);
    return result;
}

PipeProcess::PipeProcess(const std::vector<std::string>& argv, const CommandOptions& opts) {
    if (argv.empty()) throw Error("PipeProcess: empty argv");
    signal(SIGPIPE, SIG_IGN);

    Pipe in, out;
    const int pid = fork();
    if (pid < 0) throw Error(std::string("fork: ") + std::strerror(errno));
    if (pid == 0) {
        in.close_write();
        out.close_read();
        exec_child(argv, opts, in.fds[0], out.fds[1], -1);
    }
    in.close_read();
    out.close_write();
    pid_ = pid;
    in_fd_ = in.take_write();
    out_fd_ = out.take_read();
}

PipeProcess::~PipeProcess() {
    close_stdin();
    if (out_fd_ >= 0) ::close(out_fd_);
    if (pid_ >= 0 && !waited_) {
        try {
            wait();
        } catch (...) {
        }
    }
}

void PipeProcess::write(std::string_view data) {
    std::size_t off = 0;
    while (off < data.size()) {
        ssize_t w = ::write(in_fd_, data.data() + off, data.size() - off);
        if (w < 0) {
            if (errno == EINTR) continue;
            throw Error(std::string("pipe write: ") + std::strerror(errno));
        }
        off += static_cast<std::size_t>(w);
    }
}

void PipeProcess::fill_buffer() {
    char buf[65536];
    ssize_t r = read(out_fd_, buf, sizeof buf);
    if (r < 0) {
        if (errno == EINTR) return;
        throw Error(std::string("pipe read: ") + std::strerror(errno));
    }
    if (r == 0) eof_ = true;
    else buf_.append(buf, static_cast<std::size_t>(r));
}

bool PipeProcess::read_line(std::string& line) {
    while (true) {
        auto nl = buf_.find('\n', buf_pos_);
        if (nl != std::string::npos) {
            line.assign(buf_, buf_pos_, nl - buf_pos_);
            buf_pos_ = nl + 1;
            if (buf_pos_ > (1 << 20)) {
                buf_.erase(0, buf_pos_);
                buf_pos_ = 0;
            }
            return true;
        }
        if (eof_) return false;
        fill_buffer();
    }
}

std::string PipeProcess::read_exact(std::size_t n) {
    while (buf_.size() - buf_pos_ < n && !eof_) fill_buffer();
    if (buf_.size() - buf_pos_ < n) throw Error("pipe read: unexpected EOF");
    std::string out = buf_.substr(buf_pos_, n);
    buf_pos_ += n;
    if (buf_pos_ > (1 << 20)) {
        buf_.erase(0, buf_pos_);
        buf_pos_ = 0;
    }
    return out;
}

void PipeProcess::close_stdin() {
    if (in_fd_ >= 0) ::close(in_fd_);
    in_fd_ = -1;
}

int PipeProcess::wait() {
    if (!waited_) {
        exit_code_ = wait_exit_code(pid_);
        waited_ = true;
    }
    return exit_code_;
}

} // namespace miner
