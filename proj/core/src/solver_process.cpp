// Subprocess plumbing for the solver bridge (POSIX).
#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "mrp/error.hpp"
#include "mrp/smt.hpp"

namespace mrp::smt {

namespace {

struct Fd {
    int fd = -1;
    Fd() = default;
    explicit Fd(int f) : fd(f) {}
    Fd(const Fd&) = delete;
    Fd& operator=(const Fd&) = delete;
    ~Fd() { reset(); }
    void reset() {
        if (fd >= 0) ::close(fd);
        fd = -1;
    }
};

void set_nonblocking(int fd) { ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK); }

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv, const std::string& input,
                          std::chrono::milliseconds timeout) {
    if (argv.empty()) throw BridgeError("empty solver command", "");
    // stdin is a socket so writes can use MSG_NOSIGNAL when the child exits early.
    int in_pair[2], out_pipe[2], err_pipe[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, in_pair) != 0)
        throw BridgeError(std::string("socketpair failed: ") + std::strerror(errno), "");
    if (::pipe2(out_pipe, O_CLOEXEC) != 0 || ::pipe2(err_pipe, O_CLOEXEC) != 0)
        throw BridgeError(std::string("pipe failed: ") + std::strerror(errno), "");
    Fd in_w(in_pair[0]), in_r(in_pair[1]), out_r(out_pipe[0]), out_w(out_pipe[1]),
        err_r(err_pipe[0]), err_w(err_pipe[1]);

    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);

    const pid_t pid = ::fork();
    if (pid < 0) throw BridgeError(std::string("fork failed: ") + std::strerror(errno), "");
    if (pid == 0) {
        ::dup2(in_r.fd, 0);
        ::dup2(out_w.fd, 1);
        ::dup2(err_w.fd, 2);
        ::execvp(args[0], args.data());
        const char msg[] = "exec failed\n";
        [[maybe_unused]] auto n = ::write(2, msg, sizeof msg - 1);
        ::_exit(127);
    }
    in_r.reset();
    out_w.reset();
    err_w.reset();
    set_nonblocking(in_w.fd);
    set_nonblocking(out_r.fd);
    set_nonblocking(err_r.fd);

    ProcessResult res;
    std::size_t written = 0;
    if (input.empty()) in_w.reset();
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    char buf[65536];
    while (out_r.fd >= 0 || err_r.fd >= 0) {
        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            ::kill(pid, SIGKILL);
            res.timed_out = true;
            break;
        }
        pollfd fds[3];
        int n = 0;
        int idx_in = -1, idx_out = -1, idx_err = -1;
        if (in_w.fd >= 0) { idx_in = n; fds[n++] = {in_w.fd, POLLOUT, 0}; }
        if (out_r.fd >= 0) { idx_out = n; fds[n++] = {out_r.fd, POLLIN, 0}; }
        if (err_r.fd >= 0) { idx_err = n; fds[n++] = {err_r.fd, POLLIN, 0}; }
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
        const int rc = ::poll(fds, static_cast<nfds_t>(n), static_cast<int>(std::min<long long>(left, 1000)));
        if (rc < 0) {
            if (errno == EINTR) continue;
            ::kill(pid, SIGKILL);
            ::waitpid(pid, nullptr, 0);
            throw BridgeError(std::string("poll failed: ") + std::strerror(errno), "");
        }
        if (idx_in >= 0 && (fds[idx_in].revents & (POLLOUT | POLLERR | POLLHUP))) {
            const ssize_t w = ::send(in_w.fd, input.data() + written, input.size() - written, MSG_NOSIGNAL);
            if (w > 0) written += static_cast<std::size_t>(w);
            if (w < 0 && errno != EAGAIN && errno != EINTR) in_w.reset();  // child closed stdin
            if (written == input.size()) in_w.reset();
        }
        auto drain = [&](int idx, Fd& fd, std::string& sink) {
            if (idx < 0 || !(fds[idx].revents & (POLLIN | POLLHUP | POLLERR))) return;
            for (;;) {
                const ssize_t r = ::read(fd.fd, buf, sizeof buf);
                if (r > 0) {
                    sink.append(buf, static_cast<std::size_t>(r));
                    continue;
                }
                if (r == 0 || (errno != EAGAIN && errno != EINTR)) fd.reset();
                break;
            }
        };
        drain(idx_out, out_r, res.out);
        drain(idx_err, err_r, res.err);
    }
    int status = 0;
    ::waitpid(pid, &status, 0);
    if (WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
    if (WIFSIGNALED(status)) {
        res.signalled = true;
        res.exit_code = 128 + WTERMSIG(status);
    }
    if (res.exit_code == 127 && res.err.find("exec failed") != std::string::npos)
        throw BridgeError("cannot execute solver '" + argv[0] + "'", res.err);
    return res;
}

}  // namespace mrp::smt
