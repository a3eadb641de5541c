#pragma once

#include "assertions/rewrite.hpp"
#include "lang/ast.hpp"
#include "ode/solver.hpp"
#include "sync/obligation.hpp"

namespace hcspver {

struct FreshTimeVar {
  std::string name;
  BExprPtr constraint;
  ExprPtr closed_form; // null when the boundary has no explicit solution
};

struct SpecResult {
  AssertionPtr assertion;
  std::vector<Obligation> obligations;
  std::vector<FreshTimeVar> fresh_vars;
};

// Structural recursion over a sequential process following the trace-logic
// rules, continuation style: the suffix is generated first and each command
// wraps it. Substitutions are pushed eagerly, so boolean guards surface as
// ^b && P disjuncts and pending substitutions rest on init/rec leaves.
//
// mutation selects a deliberately broken rule variant (testing hook used to
// demonstrate oracle sensitivity); 0 is the correct behavior.
class SpecGenerator {
 public:
  explicit SpecGenerator(FreshNames& fresh, int mutation = 0)
      : fresh_(fresh), mutation_(mutation) {}

  SpecResult generate(const ProcessPtr& c);

  // Loop body's effect as an assertion context: the continuation's assertion
  // is left as a hole.
  AssertionPtr loop_functional(const ProcessPtr& body);

  // Assertion of an internal choice with an explicit continuation.
  AssertionPtr internal_choice(const ProcessPtr& c1, const ProcessPtr& c2,
                               const ProcessPtr& cont);

  // Communication list of an interrupt: each branch continuation's assertion
  // rebased onto the ODE solution at the interrupt time.
  std::vector<CommSpec> rel_cm(const std::vector<CommBranch>& es, const ProcessPtr& cont,
                               const OdeSolution& sol);

 private:
  AssertionPtr gen(const ProcessPtr& c, const AssertionPtr& cont);
  CommSpec rel_entry(const CommBranch& br, const AssertionPtr& qi,
                     const OdeSolution& sol);
  void record_boundary(const OdeSolution& sol);
  std::vector<std::pair<std::string, ExprPtr>> solution_at(const OdeSolution& sol,
                                                           const std::string& dvar);

  FreshNames& fresh_;
  int mutation_;
  std::vector<Obligation> obligations_;
  std::vector<FreshTimeVar> fresh_vars_;
};

} // namespace hcspver
