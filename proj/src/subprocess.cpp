#include "mg/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <stdexcept>

namespace mg {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void drain(int& fd, std::string& sink) {
  char buf[4096];
  const ssize_t n = ::read(fd, buf, sizeof buf);
  if (n > 0) {
    sink.append(buf, static_cast<std::size_t>(n));
  } else if (n == 0 || (errno != EINTR && errno != EAGAIN)) {
    ::close(fd);
    fd = -1;
  }
}

}  // namespace

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

ProcessResult run_process(const std::string& command, double timeout_seconds, double grace_seconds) {
  int out_pipe[2];
  int err_pipe[2];
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) throw std::runtime_error(std::string("pipe: ") + std::strerror(errno));
  if (::pipe2(err_pipe, O_CLOEXEC) != 0) {
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    throw std::runtime_error(std::string("pipe: ") + std::strerror(errno));
  }

  const auto t0 = Clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) ::close(fd);
    throw std::runtime_error(std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    // Child: only async-signal-safe calls from here on.
    ::setpgid(0, 0);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::dup2(err_pipe[1], STDERR_FILENO);
    const int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);

  ProcessResult result;
  int fds[2] = {out_pipe[0], err_pipe[0]};
  bool exited = false;
  int status = 0;
  bool term_sent = false;
  bool kill_sent = false;
  Clock::time_point term_time{};

  while (!exited || fds[0] >= 0 || fds[1] >= 0) {
    const double elapsed = seconds_since(t0);
    if (!term_sent && elapsed > timeout_seconds) {
      result.timed_out = true;
      ::kill(-pid, SIGTERM);
      term_sent = true;
      term_time = Clock::now();
    }
    if (term_sent && !kill_sent && seconds_since(term_time) > grace_seconds) {
      ::kill(-pid, SIGKILL);
      kill_sent = true;
    }
    // Once the process is dead, stray grandchildren may still hold the pipes.
    if (exited && kill_sent) break;
    if (exited && term_sent && !kill_sent) {
      ::kill(-pid, SIGKILL);
      kill_sent = true;
    }

    pollfd pfds[2];
    nfds_t n = 0;
    for (int fd : fds) {
      if (fd >= 0) pfds[n++] = {fd, POLLIN, 0};
    }
    if (n > 0) {
      const int ready = ::poll(pfds, n, 20);
      if (ready > 0) {
        for (nfds_t i = 0; i < n; ++i) {
          if (!(pfds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
          if (pfds[i].fd == fds[0]) drain(fds[0], result.out);
          else drain(fds[1], result.err);
        }
      }
    } else {
      ::usleep(2000);
    }
    if (!exited) {
      const pid_t r = ::waitpid(pid, &status, WNOHANG);
      if (r == pid) exited = true;
    }
  }
  for (int fd : fds) {
    if (fd >= 0) ::close(fd);
  }
  if (!exited) ::waitpid(pid, &status, 0);

  result.seconds = seconds_since(t0);
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.signaled = true;
    result.exit_code = 128 + WTERMSIG(status);
  }
  return result;
}

}  // namespace mg
