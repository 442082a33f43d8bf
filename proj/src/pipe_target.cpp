#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <stdexcept>

#include "trimap/errors.hpp"
#include "trimap/map_io.hpp"
#include "trimap/targets.hpp"

namespace trimap {

struct PipeTarget::Process {
    pid_t pid = -1;
    FILE* to_child = nullptr;
    FILE* from_child = nullptr;

    ~Process() {
        if (to_child) std::fclose(to_child);
        if (from_child) std::fclose(from_child);
        if (pid > 0) {
            int status = 0;
            waitpid(pid, &status, 0);
        }
    }
};

PipeTarget::PipeTarget(std::string command, int dim)
    : dim_(dim), command_(std::move(command)), process_(new Process) {
    int in_pipe[2], out_pipe[2];
    if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0)
        throw std::runtime_error("pipe target: pipe() failed");
    const pid_t pid = fork();
    if (pid < 0) throw std::runtime_error("pipe target: fork() failed");
    if (pid == 0) {
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        close(in_pipe[0]);
        close(in_pipe[1]);
        close(out_pipe[0]);
        close(out_pipe[1]);
        execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    process_->pid = pid;
    process_->to_child = fdopen(in_pipe[1], "w");
    process_->from_child = fdopen(out_pipe[0], "r");
    if (!process_->to_child || !process_->from_child)
        throw std::runtime_error("pipe target: fdopen() failed");
}

PipeTarget::~PipeTarget() = default;

double PipeTarget::log_density(std::span<const double> y) const {
    std::lock_guard<std::mutex> lock(mutex_);
    std::ostringstream line;
    for (int i = 0; i < dim_; ++i) {
        if (i) line << ' ';
        line << format_double(y[i]);
    }
    line << '\n';
    const std::string out = line.str();
    if (std::fputs(out.c_str(), process_->to_child) == EOF ||
        std::fflush(process_->to_child) != 0)
        throw CallbackError("pipe target: child closed its input");

    char buf[256];
    if (!std::fgets(buf, sizeof(buf), process_->from_child))
        throw CallbackError("pipe target: child produced no output");
    char* end = nullptr;
    const double v = std::strtod(buf, &end);
    if (end == buf) {
        // Accept the textual forms -inf/inf/nan that strtod already handles;
        // anything unparsable is a protocol violation.
        throw CallbackError(std::string("pipe target: unparsable reply: ") + buf);
    }
    return v;  // NaN is rejected by checked_log_density upstream
}

}  // namespace trimap
