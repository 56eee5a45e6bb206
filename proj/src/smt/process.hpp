#pragma once

#include <chrono>
#include <string>
#include <vector>

#include <sys/types.h>

namespace dmt {

// Child process with stdin/stdout pipes. stderr is merged into stdout so that
// solver diagnostics surface as replies.
class SolverProcess {
 public:
  SolverProcess(const std::string& binary, const std::vector<std::string>& args);
  ~SolverProcess();
  SolverProcess(const SolverProcess&) = delete;
  SolverProcess& operator=(const SolverProcess&) = delete;

  void send(const std::string& text);
  // Reads one complete s-expression or atom. Returns false on deadline.
  bool read_sexpr(std::string& out, std::chrono::steady_clock::time_point deadline);
  bool alive() const { return pid_ > 0; }
  void kill_now();

 private:
  bool fill(std::chrono::steady_clock::time_point deadline);

  pid_t pid_ = -1;
  int in_ = -1;
  int out_ = -1;
  std::string buf_;
};

}  // namespace dmt
