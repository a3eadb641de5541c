#include "sync/smt_backend.hpp"

#include "core/expr.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

namespace hcspver {

SmtSolver::SmtSolver(std::string command, int timeout_ms)
    : command_(std::move(command)), timeout_ms_(timeout_ms) {
  const std::string suffix = "--server";
  if (command_.size() >= suffix.size() &&
      command_.compare(command_.size() - suffix.size(), suffix.size(), suffix) == 0)
    server_mode_ = true;
}

SmtSolver::~SmtSolver() {
  if (server_pid_ > 0) {
    close(to_child_);
    close(from_child_);
    kill(server_pid_, SIGTERM);
    int status = 0;
    waitpid(server_pid_, &status, 0);
  }
}

namespace {

SmtSolver::Result parse_result(const std::string& out) {
  std::istringstream is(out);
  std::string line, last;
  while (std::getline(is, line)) {
    while (!line.empty() && isspace(static_cast<unsigned char>(line.back())))
      line.pop_back();
    if (line == "sat" || line == "unsat" || line == "unknown") last = line;
  }
  if (last == "unsat") return SmtSolver::Result::Unsat;
  if (last == "sat") return SmtSolver::Result::Sat;
  return SmtSolver::Result::Unknown;
}

} // namespace

SmtSolver::Result SmtSolver::check(const std::string& script) {
  if (!available()) return Result::Unavailable;
  auto it = memo_.find(script);
  if (it != memo_.end()) return it->second;
  ++queries_;
  Result r = server_mode_ ? run_server(script) : run_oneshot(script);
  memo_.emplace(script, r);
  return r;
}

SmtSolver::Result SmtSolver::run_oneshot(const std::string& script) {
  char tmpl[] = "/tmp/hcspver-XXXXXX.smt2";
  int fd = mkstemps(tmpl, 5);
  if (fd < 0) throw VerifyError("cannot create temporary SMT file");
  {
    std::ofstream os(tmpl);
    os << script;
  }
  close(fd);
  std::string cmd = command_ + " " + tmpl + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    unlink(tmpl);
    throw VerifyError("cannot run SMT solver: " + command_);
  }
  std::string out;
  char buf[256];
  while (fgets(buf, sizeof buf, p)) out += buf;
  pclose(p);
  unlink(tmpl);
  return parse_result(out);
}

void SmtSolver::spawn_server() {
  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) || pipe(out_pipe)) throw VerifyError("pipe failed");
  int pid = fork();
  if (pid < 0) throw VerifyError("fork failed");
  if (pid == 0) {
    dup2(in_pipe[0], 0);
    dup2(out_pipe[1], 1);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", command_.c_str(), (char*)nullptr);
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  server_pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
}

SmtSolver::Result SmtSolver::run_server(const std::string& script) {
  if (server_pid_ < 0) spawn_server();
  std::string msg = script + "\n@@CHECK@@\n";
  size_t off = 0;
  while (off < msg.size()) {
    ssize_t n = write(to_child_, msg.data() + off, msg.size() - off);
    if (n <= 0) throw VerifyError("SMT server write failed");
    off += static_cast<size_t>(n);
  }
  std::string line;
  char c;
  while (true) {
    ssize_t n = read(from_child_, &c, 1);
    if (n <= 0) throw VerifyError("SMT server closed unexpectedly");
    if (c == '\n') {
      if (line == "sat") return Result::Sat;
      if (line == "unsat") return Result::Unsat;
      if (line == "unknown") return Result::Unknown;
      line.clear(); // skip chatter
    } else {
      line += c;
    }
  }
}

} // namespace hcspver
