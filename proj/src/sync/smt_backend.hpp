#pragma once

#include <map>
#include <string>

namespace hcspver {

// External SMT-LIB v2 solver behind a subprocess boundary.
//
// One-shot mode: the command is run as `cmd script.smt2` per query and must
// print sat/unsat/unknown. Server mode (command ending in "--server"): the
// process is spawned once; each query is the script followed by a line
// containing only @@CHECK@@, answered with one result line. Results are
// memoized per script.
class SmtSolver {
 public:
  SmtSolver() = default;
  explicit SmtSolver(std::string command, int timeout_ms = 30000);
  ~SmtSolver();

  SmtSolver(const SmtSolver&) = delete;
  SmtSolver& operator=(const SmtSolver&) = delete;

  enum class Result { Unsat, Sat, Unknown, Unavailable };

  bool available() const { return !command_.empty(); }
  Result check(const std::string& script);

  int queries_issued() const { return queries_; }

 private:
  Result run_oneshot(const std::string& script);
  Result run_server(const std::string& script);
  void spawn_server();

  std::string command_;
  int timeout_ms_ = 30000;
  bool server_mode_ = false;
  int server_pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  int queries_ = 0;
  std::map<std::string, Result> memo_;
};

} // namespace hcspver
