#include "lingsel/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "lingsel/corpus.hpp"

namespace lingsel {
namespace {

void set_nonblocking(int fd) {
  fcntl(fd, F_SETFL, fcntl(fd, F_GETFL, 0) | O_NONBLOCK);
}

std::vector<std::string> split_output(const std::string &data) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < data.size()) {
    std::size_t nl = data.find('\n', start);
    if (nl == std::string::npos) {
      lines.push_back(data.substr(start));
      break;
    }
    lines.push_back(data.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

}  // namespace

std::vector<std::string> run_line_filter(const std::string &command,
                                         const std::vector<std::string> &input,
                                         double timeout_seconds) {
  signal(SIGPIPE, SIG_IGN);

  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0)
    throw Error("cannot create pipes for translator process");

  const pid_t pid = fork();
  if (pid < 0) throw Error("cannot fork translator process");
  if (pid == 0) {
    setpgid(0, 0);  // own process group, so a timeout can kill all of it
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), nullptr);
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  set_nonblocking(in_pipe[1]);
  set_nonblocking(out_pipe[0]);

  std::string to_send;
  for (const auto &line : input) {
    to_send += line;
    to_send += '\n';
  }
  std::size_t sent = 0;
  std::string received;

  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration<double>(timeout_seconds);
  bool stdin_open = true;
  if (to_send.empty()) {
    close(in_pipe[1]);
    stdin_open = false;
  }
  bool stdout_open = true;
  while (stdout_open || stdin_open) {
    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      if (kill(-pid, SIGKILL) != 0) kill(pid, SIGKILL);
      waitpid(pid, nullptr, 0);
      if (stdin_open) close(in_pipe[1]);
      if (stdout_open) close(out_pipe[0]);
      throw Error("translator process timed out: " + command);
    }
    const int wait_ms = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
            .count());
    struct pollfd fds[2];
    int nfds = 0;
    int out_idx = -1, in_idx = -1;
    if (stdout_open) {
      out_idx = nfds;
      fds[nfds++] = {out_pipe[0], POLLIN, 0};
    }
    if (stdin_open) {
      in_idx = nfds;
      fds[nfds++] = {in_pipe[1], POLLOUT, 0};
    }
    const int rc = poll(fds, nfds, std::min(wait_ms, 200));
    if (rc < 0 && errno != EINTR) break;
    if (out_idx >= 0 && (fds[out_idx].revents & (POLLIN | POLLHUP))) {
      char buf[65536];
      const ssize_t n = read(out_pipe[0], buf, sizeof(buf));
      if (n > 0) {
        received.append(buf, static_cast<std::size_t>(n));
      } else if (n == 0) {
        close(out_pipe[0]);
        stdout_open = false;
      } else if (errno != EAGAIN && errno != EINTR) {
        close(out_pipe[0]);
        stdout_open = false;
      }
    }
    if (in_idx >= 0 && (fds[in_idx].revents & (POLLOUT | POLLERR))) {
      if (fds[in_idx].revents & POLLERR) {
        close(in_pipe[1]);
        stdin_open = false;
      } else {
        const ssize_t n =
            write(in_pipe[1], to_send.data() + sent, to_send.size() - sent);
        if (n > 0) {
          sent += static_cast<std::size_t>(n);
          if (sent == to_send.size()) {
            close(in_pipe[1]);
            stdin_open = false;
          }
        } else if (n < 0 && errno != EAGAIN && errno != EINTR) {
          close(in_pipe[1]);
          stdin_open = false;
        }
      }
    }
  }

  int status = 0;
  waitpid(pid, &status, 0);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
    throw Error("translator process failed (status " +
                std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1) +
                "): " + command);
  return split_output(received);
}

std::vector<std::string> run_command(const std::string &command,
                                     double timeout_seconds) {
  return run_line_filter(command, {}, timeout_seconds);
}

}  // namespace lingsel
