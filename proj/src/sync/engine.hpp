#pragma once

#include "assertions/rewrite.hpp"
#include "specgen/generate.hpp"
#include "sync/obligation.hpp"
#include "sync/smt_backend.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hcspver {

// Assertion of one parallel component with all program variables carrying
// the component's name prefix (path time and binder variables exempt).
struct NamedAssertion {
  std::set<std::string> prefixes;
  AssertionPtr assertion;
  std::vector<FreshTimeVar> fresh_vars;
};

// Attaches a process-name prefix to every program variable of a generated
// specification. The name must be new for the verification run.
NamedAssertion prefix_process(const std::string& name, const SpecResult& spec,
                              std::set<std::string>& used_names);

// Validates that an expression reads a single component's state and returns
// it unchanged (variable prefixes already make the lifting syntactic).
ExprPtr lift(const ExprPtr& e, const std::set<std::string>& prefixes);
BExprPtr lift(const BExprPtr& b, const std::set<std::string>& prefixes);

// Handshake impossible over the shared channels (assertion-level form).
bool compat_cm(const std::vector<CommSpec>& cm1, const std::vector<CommSpec>& cm2,
               const std::set<std::string>& chs);

struct SyncStats {
  int branches_generated = 0;
  int branches_pruned = 0;
  int branches_kept = 0;
};

struct RecPremiseError : VerifyError {
  int premise;
  RecPremiseError(int premise_, const std::string& msg)
      : VerifyError("recursion synchronization premise " + std::to_string(premise_) +
                    " violated: " + msg),
        premise(premise_) {}
};

// Eliminates sync residuals by the synchronization rules, threading the
// accumulated condition. Undecided conflicts keep the branch and are
// exported as audit obligations; decided prunes export unsat witnesses.
class SyncEngine {
 public:
  // Waiting-family assertions seen uniformly as interrupts. A null e is an
  // infinite maximum waiting time; tail is absent exactly when e is null.
  struct View {
    PathAssertion path;
    ExprPtr e;
    std::optional<Binder> tail;
    std::vector<CommSpec> cm;
    AssertionPtr original;
  };

  struct Options {
    BExprPtr rec_cond;          // loop-entry condition, defaults to true
    BExprPtr goal;              // safety goal checked per kept branch, may be null
    int solver_timeout_ms = 30000;
  };

  SyncEngine(FreshNames& fresh, SmtSolver& solver, Options opt);

  AssertionPtr synchronize(const std::set<std::string>& chs, const NamedAssertion& l,
                           const NamedAssertion& r, const BExprPtr& cond0);

  std::vector<Obligation> take_obligations() { return std::move(obligations_); }
  const SyncStats& iteration_stats() const { return iter_stats_; }

 private:
  AssertionPtr sync(const AssertionPtr& l, const AssertionPtr& r, const BExprPtr& cond);
  AssertionPtr rec_rule(const AssertionPtr& l, const AssertionPtr& r,
                        const BExprPtr& cond);
  AssertionPtr interrupt_sync(const View& vl, const View& vr, const BExprPtr& cond);
  AssertionPtr init_sync(const View& v, bool init_on_left, const BExprPtr& cond);
  AssertionPtr comm_pairs(const View& vl, const View& vr, const BExprPtr& cond);
  BExprPtr pull_subst_cond(const BExprPtr& cond,
                           const std::vector<std::pair<std::string, ExprPtr>>& subs);
  std::vector<CommSpec> rel_lists(const View& vl, const View& vr, const BExprPtr& cond,
                                  const ExprPtr& bound);

  bool prune(const BExprPtr& cond, const BExprPtr& guard, const std::string& origin);
  void emit(Obligation ob);
  void leaf_kept(const BExprPtr& cond);

  FreshNames& fresh_;
  SmtSolver& solver_;
  Options opt_;
  std::set<std::string> chs_;
  std::set<std::string> lpref_, rpref_, allpref_;

  std::vector<Obligation> obligations_;
  std::set<std::string> obligation_keys_;
  SyncStats iter_stats_;
  bool counting_ = false;
  int premise_mode_ = 0; // 1 or 2 while checking the exit/loop mismatch premises
  int branch_counter_ = 0;
};

} // namespace hcspver
