#include "process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstring>
#include <thread>

#include "dmt/smt.hpp"

extern char** environ;

namespace dmt {

namespace {

void ignore_sigpipe() {
  static const bool once = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)once;
}

}  // namespace

SolverProcess::SolverProcess(const std::string& binary, const std::vector<std::string>& args) {
  ignore_sigpipe();
  int to_child[2], from_child[2];
  if (::pipe2(to_child, O_CLOEXEC) != 0 || ::pipe2(from_child, O_CLOEXEC) != 0)
    throw SmtError(std::string("pipe: ") + std::strerror(errno));

  posix_spawn_file_actions_t fa;
  posix_spawn_file_actions_init(&fa);
  posix_spawn_file_actions_adddup2(&fa, to_child[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&fa, from_child[1], STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&fa, from_child[1], STDERR_FILENO);

  std::vector<std::string> argv_s{binary};
  argv_s.insert(argv_s.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_s) argv.push_back(s.data());
  argv.push_back(nullptr);

  int rc = ::posix_spawnp(&pid_, binary.c_str(), &fa, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&fa);
  ::close(to_child[0]);
  ::close(from_child[1]);
  if (rc != 0) {
    ::close(to_child[1]);
    ::close(from_child[0]);
    pid_ = -1;
    throw SmtError("cannot start solver '" + binary + "': " + std::strerror(rc));
  }
  in_ = to_child[1];
  out_ = from_child[0];
}

SolverProcess::~SolverProcess() {
  if (pid_ <= 0) return;
  try {
    send("(exit)\n");
  } catch (...) {
  }
  ::close(in_);
  for (int i = 0; i < 50; ++i) {
    if (::waitpid(pid_, nullptr, WNOHANG) == pid_) {
      ::close(out_);
      return;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  ::kill(pid_, SIGKILL);
  ::waitpid(pid_, nullptr, 0);
  ::close(out_);
}

void SolverProcess::kill_now() {
  if (pid_ <= 0) return;
  ::kill(pid_, SIGKILL);
  ::waitpid(pid_, nullptr, 0);
  ::close(in_);
  ::close(out_);
  pid_ = -1;
}

void SolverProcess::send(const std::string& text) {
  const char* p = text.data();
  std::size_t left = text.size();
  while (left > 0) {
    ssize_t n = ::write(in_, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw SmtError(std::string("solver write failed: ") + std::strerror(errno));
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
}

bool SolverProcess::fill(std::chrono::steady_clock::time_point deadline) {
  for (;;) {
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) return false;
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    pollfd pfd{out_, POLLIN, 0};
    int r = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(ms + 1, 1 << 30)));
    if (r < 0) {
      if (errno == EINTR) continue;
      throw SmtError(std::string("poll: ") + std::strerror(errno));
    }
    if (r == 0) continue;
    char tmp[8192];
    ssize_t n = ::read(out_, tmp, sizeof tmp);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw SmtError(std::string("solver read failed: ") + std::strerror(errno));
    }
    if (n == 0) throw SmtError("solver process exited unexpectedly" + (buf_.empty() ? "" : ": " + buf_));
    buf_.append(tmp, static_cast<std::size_t>(n));
    return true;
  }
}

bool SolverProcess::read_sexpr(std::string& out, std::chrono::steady_clock::time_point deadline) {
  for (;;) {
    // scan buf_ for one complete expression
    std::size_t i = 0;
    while (i < buf_.size() && std::isspace(static_cast<unsigned char>(buf_[i]))) ++i;
    if (i < buf_.size()) {
      int depth = 0;
      bool in_str = false, in_quote = false;
      std::size_t j = i;
      bool done = false;
      for (; j < buf_.size(); ++j) {
        char c = buf_[j];
        if (in_str) {
          if (c == '"') {
            if (j + 1 < buf_.size() && buf_[j + 1] == '"')
              ++j;
            else
              in_str = false;
          }
          continue;
        }
        if (in_quote) {
          if (c == '|') in_quote = false;
          continue;
        }
        if (c == '"') in_str = true;
        else if (c == '|') in_quote = true;
        else if (c == '(') ++depth;
        else if (c == ')') {
          if (--depth == 0) {
            ++j;
            done = true;
            break;
          }
        } else if (depth == 0 && std::isspace(static_cast<unsigned char>(c))) {
          done = true;
          break;
        }
      }
      if (done) {
        out = buf_.substr(i, j - i);
        buf_.erase(0, j);
        return true;
      }
    }
    if (!fill(deadline)) return false;
  }
}

}  // namespace dmt
