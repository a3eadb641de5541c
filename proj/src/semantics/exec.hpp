#pragma once

#include "lang/ast.hpp"
#include "semantics/trace.hpp"

namespace hcspver {

struct DeadlockError : VerifyError {
  using VerifyError::VerifyError;
};

struct DivergenceError : VerifyError {
  using VerifyError::VerifyError;
};

// Big-step execution of a sequential process; the schedule resolves every
// nondeterministic choice. Deterministic: same (c, s, sched) gives the same
// result.
std::pair<State, Trace> exec(const ProcessPtr& c, const State& s, Schedule& sched);

// All synchronizations of two traces over the shared channel set.
// Nondeterministic where several derivations apply; results are deduplicated
// and sorted by semantic key (deadlock-free traces first).
std::vector<Trace> sync_traces(const Trace& tr1, const std::set<std::string>& cs,
                               const Trace& tr2);

// Executes a parallel composition: runs both sides on their schedule
// segments, synchronizes the traces, and picks one synchronization (via a
// sync_pick item when several deadlock-free results exist). Reports deadlock
// when no deadlock-free synchronization exists.
std::pair<State, Trace> exec_parallel(const ProcessPtr& pc, const State& s,
                                      Schedule& sched);

} // namespace hcspver
