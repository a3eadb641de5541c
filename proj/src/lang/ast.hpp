#pragma once

#include "core/expr.hpp"

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hcspver {

// HCSP abstract syntax. The grammar is two-level: sequential commands, and
// parallel composition which may only appear at the top (never under Seq,
// Repeat, Cond, ...).

struct Process;
using ProcessPtr = std::shared_ptr<const Process>;

enum class ProcKind {
  Skip,
  Assign,
  Input,
  Output,
  IChoice,
  Seq,
  Repeat,
  Cond,
  Ode,
  Wait,
  Interrupt,
  Parallel,
};

struct OdeEq {
  std::string var;
  ExprPtr rhs;
};

struct CommBranch {
  bool is_input = true;
  std::string chan;
  std::string var; // input target
  ExprPtr expr;    // output value
  ProcessPtr cont;
};

struct Process {
  ProcKind kind;
  std::string var;  // Assign target, Input target
  std::string chan; // Input/Output
  ExprPtr expr;     // Assign rhs, Output value, Wait duration
  BExprPtr guard;   // Cond test, Ode/Interrupt domain
  ProcessPtr a, b;  // children: Seq/IChoice/Cond/Parallel; Repeat body = a;
                    // Interrupt tail = a
  std::vector<OdeEq> eqs;         // Ode, Interrupt
  std::vector<CommBranch> comms;  // Interrupt (non-empty)
  std::set<std::string> chanset;  // Parallel shared channels
};

ProcessPtr p_skip();
ProcessPtr p_assign(const std::string& x, ExprPtr e);
ProcessPtr p_input(const std::string& ch, const std::string& x);
ProcessPtr p_output(const std::string& ch, ExprPtr e);
ProcessPtr p_ichoice(ProcessPtr a, ProcessPtr b);
ProcessPtr p_seq(ProcessPtr a, ProcessPtr b);
ProcessPtr p_repeat(ProcessPtr body);
ProcessPtr p_cond(BExprPtr test, ProcessPtr a, ProcessPtr b);
ProcessPtr p_ode(std::vector<OdeEq> eqs, BExprPtr domain);
ProcessPtr p_wait(ExprPtr e);
ProcessPtr p_interrupt(std::vector<OdeEq> eqs, BExprPtr domain, ProcessPtr tail,
                       std::vector<CommBranch> comms);
ProcessPtr p_parallel(ProcessPtr a, std::set<std::string> chans, ProcessPtr b);

bool process_equal(const ProcessPtr& a, const ProcessPtr& b);
bool is_sequential(const ProcessPtr& p);

std::string pretty(const ProcessPtr& p);

std::set<std::string> free_vars(const ProcessPtr& p);
std::set<std::string> channels(const ProcessPtr& p);

// Renames every program variable through f (channels untouched).
ProcessPtr rename_vars(const ProcessPtr& p,
                       const std::function<std::string(const std::string&)>& f);

} // namespace hcspver
