#include "specgen/generate.hpp"

namespace hcspver {

std::vector<std::pair<std::string, ExprPtr>> SpecGenerator::solution_at(
    const OdeSolution& sol, const std::string& dvar) {
  std::vector<std::pair<std::string, ExprPtr>> subs;
  std::map<std::string, ExprPtr> at{{kPathTime, bvar(dvar)}};
  for (const auto& eq : sol.eqs) {
    ExprPtr comp = sol.solution.at(eq.var);
    if (mutation_ == 3) at[kPathTime] = num(0); // drop the time dependence
    subs.emplace_back(eq.var, simplify(subst_bound(comp, at)));
  }
  return subs;
}

std::vector<CommSpec> SpecGenerator::rel_cm(const std::vector<CommBranch>& es,
                                            const ProcessPtr& cont,
                                            const OdeSolution& sol) {
  std::vector<CommSpec> cm;
  for (const auto& br : es) {
    AssertionPtr qi = gen(br.cont, gen(cont, a_init()));
    cm.push_back(rel_entry(br, qi, sol));
  }
  return cm;
}

CommSpec SpecGenerator::rel_entry(const CommBranch& br, const AssertionPtr& qi,
                                  const OdeSolution& sol) {
  std::string d = fresh_.fresh_bound("d");
  auto at_d = solution_at(sol, d);
  if (br.is_input) {
    std::string v = fresh_.fresh_bound("v");
    AssertionPtr body = push_subst(qi, {{br.var, bvar(v)}});
    body = push_subst(body, at_d);
    return CommSpec{true, br.chan, {}, Binder{d, v, body}};
  }
  std::map<std::string, ExprPtr> at_d_map(at_d.begin(), at_d.end());
  ExprPtr value = simplify(subst_vars(br.expr, at_d_map));
  AssertionPtr body = push_subst(qi, at_d);
  return CommSpec{false, br.chan, ExprBinder{d, value}, Binder{d, "", body}};
}

AssertionPtr SpecGenerator::gen(const ProcessPtr& c, const AssertionPtr& cont) {
  switch (c->kind) {
    case ProcKind::Skip: return cont;
    case ProcKind::Assign: {
      if (mutation_ == 1) return cont; // forget the state update
      return push_subst(cont, {{c->var, simplify(c->expr)}});
    }
    case ProcKind::Input: {
      std::string d = fresh_.fresh_bound("d");
      std::string v = fresh_.fresh_bound("v");
      AssertionPtr body =
          mutation_ == 2 ? cont : push_subst(cont, {{c->var, bvar(v)}});
      return a_wait_in(path_id(), c->chan, Binder{d, v, body});
    }
    case ProcKind::Output: {
      std::string d = fresh_.fresh_bound("d");
      return a_wait_outv(path_id(), c->chan, simplify(c->expr), Binder{d, "", cont});
    }
    case ProcKind::Wait: {
      std::string d = fresh_.fresh_bound("d");
      ExprPtr e = simplify(c->expr);
      if (mutation_ == 5) e = simplify(add(e, num(1)));
      return a_wait(path_id(), e, Binder{d, "", cont});
    }
    case ProcKind::Seq: return gen(c->a, gen(c->b, cont));
    case ProcKind::Cond: {
      BExprPtr g = simplify(c->guard);
      AssertionPtr p = gen(c->a, cont);
      AssertionPtr q = gen(c->b, cont);
      if (mutation_ == 4) std::swap(p, q);
      return a_disj(a_bool(g, p), a_bool(simplify(bnot(g)), q));
    }
    case ProcKind::IChoice: return a_disj(gen(c->a, cont), gen(c->b, cont));
    case ProcKind::Repeat: return a_rec(cont, gen(c->a, a_hole()));
    case ProcKind::Ode: {
      OdeSolution sol = solve_ode(c->eqs, c->guard, fresh_);
      if (!check_lipschitz(c->eqs))
        throw UnsupportedOde("no uniqueness witness for the ODE system");
      if (sol.infinite) return a_false(); // the evolution never terminates
      std::string d = fresh_.fresh_bound("d");
      AssertionPtr body = push_subst(cont, solution_at(sol, d));
      AssertionPtr wait =
          a_wait(path_of_solution(sol.solution), var(sol.time_var), Binder{d, "", body});
      record_boundary(sol);
      return a_bool(sol.constraint, wait);
    }
    case ProcKind::Interrupt: {
      OdeSolution sol = solve_ode(c->eqs, c->guard, fresh_);
      if (!check_lipschitz(c->eqs))
        throw UnsupportedOde("no uniqueness witness for the ODE system");
      std::vector<CommSpec> cm;
      for (const auto& br : c->comms) cm.push_back(rel_entry(br, gen(br.cont, cont), sol));
      if (sol.infinite) return a_interrupt_inf(path_of_solution(sol.solution), cm);
      AssertionPtr tail_spec = gen(c->a, cont);
      std::string d = fresh_.fresh_bound("d");
      AssertionPtr tail = push_subst(tail_spec, solution_at(sol, d));
      record_boundary(sol);
      return a_bool(sol.constraint,
                    a_interrupt(path_of_solution(sol.solution), var(sol.time_var),
                                Binder{d, "", tail}, std::move(cm)));
    }
    case ProcKind::Parallel:
      throw VerifyError("specification generation applies to sequential processes");
  }
  throw VerifyError("unreachable process kind");
}

void SpecGenerator::record_boundary(const OdeSolution& sol) {
  fresh_vars_.push_back({sol.time_var, sol.constraint,
                         sol.explicit_boundary ? sol.closed_form : nullptr});
  if (sol.least_crossing_goal) {
    obligations_.push_back({"least-crossing for " + sol.time_var, sol.constraint,
                            sol.least_crossing_goal, Obligation::Expect::Valid});
  }
}

SpecResult SpecGenerator::generate(const ProcessPtr& c) {
  obligations_.clear();
  fresh_vars_.clear();
  AssertionPtr a = normalize(gen(c, a_init()));
  return {a, std::move(obligations_), std::move(fresh_vars_)};
}

AssertionPtr SpecGenerator::loop_functional(const ProcessPtr& body) {
  return normalize(gen(body, a_hole()));
}

AssertionPtr SpecGenerator::internal_choice(const ProcessPtr& c1, const ProcessPtr& c2,
                                            const ProcessPtr& cont) {
  AssertionPtr q = gen(cont, a_init());
  return normalize(a_disj(gen(c1, q), gen(c2, q)));
}

} // namespace hcspver
