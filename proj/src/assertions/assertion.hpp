#pragma once

#include "core/expr.hpp"
#include "core/names.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace hcspver {

// ---------------------------------------------------------------------------
// Path assertions: predicates over (s0, t, s). The map gives closed forms for
// the evolving variables; variables outside the map stay at their s0 value.
// The empty map is id_inv.
// ---------------------------------------------------------------------------

struct PathAssertion {
  std::map<std::string, ExprPtr> sol; // var -> Expr over (s0 vars, t)

  bool is_id() const { return sol.empty(); }
};

PathAssertion path_id();
PathAssertion path_of_solution(const std::map<std::string, ExprPtr>& sol);
PathAssertion path_delay(const PathAssertion& p, const ExprPtr& d);
PathAssertion path_merge(const PathAssertion& a, const PathAssertion& b);
PathAssertion path_subst(const PathAssertion& p,
                         const std::map<std::string, ExprPtr>& subs);
std::string path_str(const PathAssertion& p);
bool path_equal(const PathAssertion& a, const PathAssertion& b);

// ---------------------------------------------------------------------------
// Parameterized assertions over (s0, s, tr)
// ---------------------------------------------------------------------------

struct Assertion;
using AssertionPtr = std::shared_ptr<const Assertion>;

// {d => body} or {(d, v) => body}; names are globally unique bound variables.
struct Binder {
  std::string dvar;
  std::string vvar; // empty for delay-only binders
  AssertionPtr body;
};

// {d => expr}: output value as a function of the delay.
struct ExprBinder {
  std::string dvar;
  ExprPtr body;
};

struct CommSpec {
  bool is_input = true;
  std::string chan;
  ExprBinder value; // output only
  Binder body;      // input binds (d, v); output binds d
};

enum class AKind {
  True, False, Init,
  Conj, Disj, Bool, Subst,
  WaitIn, WaitOutv, Wait, Interrupt, InterruptInf,
  Rec, Sync, Hole,
};

struct Assertion {
  AKind kind;
  AssertionPtr a, b;  // Conj/Disj children; Bool/Subst inner = a;
                      // Rec base = a, functional = b; Sync left = a, right = b
  BExprPtr guard;     // Bool
  std::vector<std::pair<std::string, ExprPtr>> subs; // Subst, simultaneous
  PathAssertion path;
  std::string chan;
  ExprPtr expr;              // WaitOutv value; Wait/Interrupt max waiting time
  Binder body;               // WaitIn/WaitOutv/Wait body; Interrupt tail
  std::vector<CommSpec> cm;  // Interrupt/InterruptInf
  std::set<std::string> chs; // Sync
  int hole = 0;              // Hole marker (0 = recursion hole)
};

AssertionPtr a_true();
AssertionPtr a_false();
AssertionPtr a_init();
AssertionPtr a_conj(AssertionPtr p, AssertionPtr q);
AssertionPtr a_disj(AssertionPtr p, AssertionPtr q); // false units dropped
AssertionPtr a_disjn(std::vector<AssertionPtr> ps);
AssertionPtr a_bool(BExprPtr b, AssertionPtr p); // ^b && p
AssertionPtr a_subst(AssertionPtr p, std::vector<std::pair<std::string, ExprPtr>> subs);
AssertionPtr a_wait_in(PathAssertion i, const std::string& ch, Binder body);
AssertionPtr a_wait_outv(PathAssertion i, const std::string& ch, ExprPtr e, Binder body);
AssertionPtr a_wait(PathAssertion i, ExprPtr e, Binder body);
AssertionPtr a_interrupt(PathAssertion i, ExprPtr e, Binder tail,
                         std::vector<CommSpec> cm);
AssertionPtr a_interrupt_inf(PathAssertion i, std::vector<CommSpec> cm);
AssertionPtr a_rec(AssertionPtr base, AssertionPtr functional);
AssertionPtr a_sync(std::set<std::string> chs, AssertionPtr l, AssertionPtr r);
AssertionPtr a_hole(int tag = 0);

// Ready set of a communication list: (channel, is_input) pairs.
std::set<std::pair<std::string, bool>> rdy(const std::vector<CommSpec>& cm);

// Replaces holes with the given tag.
AssertionPtr fill_hole(const AssertionPtr& a, const AssertionPtr& value, int tag = 0);

bool contains_kind(const AssertionPtr& a, AKind k);

// Instantiates a binder at a concrete or symbolic delay/value.
AssertionPtr binder_apply(const Binder& b, const ExprPtr& d, const ExprPtr& v = nullptr);
ExprPtr expr_binder_apply(const ExprBinder& f, const ExprPtr& d);

// Stable pretty form; binder names are canonicalized by nesting depth
// (d, v, d2, v2, ...), recursion variables print as R.
std::string assertion_str(const AssertionPtr& a);

// Structural equality modulo binder naming (compares canonical prints).
bool assertion_equal(const AssertionPtr& a, const AssertionPtr& b);

} // namespace hcspver
