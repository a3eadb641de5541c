#pragma once

#include "assertions/assertion.hpp"

namespace hcspver {

// Distributes a simultaneous substitution through the assertion structure.
// Substitutions come to rest on init, rec, sync and hole leaves; the result
// never has a substitution above a structural constructor.
AssertionPtr push_subst(const AssertionPtr& a,
                        const std::vector<std::pair<std::string, ExprPtr>>& subs);

// Shifts a waiting-family assertion forward by delay d: the path moves to
// t+d, finite waiting times shrink by d and every binder body is re-based.
// delay(0, a) returns a unchanged.
AssertionPtr delay_assertion(const ExprPtr& d, const AssertionPtr& a, FreshNames& fresh);

// Canonical form: the most specific waiting constructor is chosen
// (single-communication infinite interrupts become wait_in/wait_outv, an
// interrupt without communications becomes wait, an infinite interrupt
// without communications is unsatisfiable), nested boolean lifts merge.
// Idempotent and satisfaction-preserving.
AssertionPtr normalize(const AssertionPtr& a);

// One child step inside an assertion; used to address sub-assertions.
using Position = std::vector<int>;

struct LocalRewrite {
  Position pos;
  AssertionPtr replacement;
};

// Replaces sub-assertions at the given positions. Each replacement must be
// justified by entailment in the direction old => new by the caller; the
// rewrite itself only applies the congruence. Child indexing: Conj/Disj 0|1,
// Bool/Subst 0, waiting bodies 0, Interrupt tail 0 and branch i at 1+i,
// InterruptInf branch i at i, Rec base 0 functional 1, Sync 0|1.
AssertionPtr mono_rewrite(const AssertionPtr& a, const std::vector<LocalRewrite>& rws);

} // namespace hcspver
