#pragma once

#include "assertions/assertion.hpp"
#include "semantics/trace.hpp"

namespace hcspver {

// Checks (s0, s, tr) against a parameterized assertion by searching the
// introduction rules. Synchronized handshake events are transparent: they
// are internal to a parallel composition and no rule mentions them.
// Deadlocked traces satisfy nothing except `true`.
//
// rec_bound caps the unfolding count of recursion assertions (the rule is
// existential in the number of iterations); callers that know the loop
// count of the producing run should pass at least that. A negative bound
// selects the default of trace length + 8.
// auto_def names boundary-time variables that a boolean guard may define via
// an equation v = e; they are bound on first use instead of being required
// in s0.
bool satisfies(const State& s0, const State& s, const Trace& tr, const AssertionPtr& a,
               long rec_bound = -1, const std::set<std::string>* auto_def = nullptr);

} // namespace hcspver
