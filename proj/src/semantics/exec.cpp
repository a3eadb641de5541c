#include "semantics/exec.hpp"

#include "ode/solver.hpp"

#include <algorithm>

namespace hcspver {

namespace {

ContPath const_path(const State& s) { return ContPath{s, {}}; }

ContPath solution_path(const State& s, const OdeSolution& sol) {
  ContPath p{s, {}};
  for (const auto& [v, e] : sol.solution) p.sol.emplace(v, e);
  return p;
}

RdySet comm_rdy(const std::vector<CommBranch>& comms) {
  RdySet r;
  for (const auto& c : comms) r.emplace(c.chan, c.is_input);
  return r;
}

void append(Trace& tr, Event e) { tr.events.push_back(std::move(e)); }

struct Executor {
  Schedule& sched;

  std::pair<State, Trace> run(const ProcessPtr& c, const State& s) {
    Trace tr;
    State out = step(c, s, tr);
    return {std::move(out), std::move(tr)};
  }

  State step(const ProcessPtr& c, State s, Trace& tr) {
    switch (c->kind) {
      case ProcKind::Skip: return s;
      case ProcKind::Assign: {
        Rational v = eval_expr(c->expr, s);
        s.update(c->var, v);
        return s;
      }
      case ProcKind::Output: {
        Rational d = sched.take(SchedItem::Kind::Delay, "output delay").amount;
        if (d < 0) throw VerifyError("negative delay in schedule");
        Rational v = eval_expr(c->expr, s);
        if (d > 0) append(tr, ev_cont(d, const_path(s), {{c->chan, false}}));
        append(tr, ev_comm(Dir::Out, c->chan, v));
        return s;
      }
      case ProcKind::Input: {
        Rational d = sched.take(SchedItem::Kind::Delay, "input delay").amount;
        if (d < 0) throw VerifyError("negative delay in schedule");
        Rational v = sched.take(SchedItem::Kind::Value, "input value").amount;
        if (d > 0) append(tr, ev_cont(d, const_path(s), {{c->chan, true}}));
        append(tr, ev_comm(Dir::In, c->chan, v));
        s.update(c->var, v);
        return s;
      }
      case ProcKind::Seq: {
        s = step(c->a, std::move(s), tr);
        return step(c->b, std::move(s), tr);
      }
      case ProcKind::IChoice: {
        int i = sched.take(SchedItem::Kind::Branch, "choice branch").index;
        if (i != 0 && i != 1) throw VerifyError("choice branch out of range");
        return step(i == 0 ? c->a : c->b, std::move(s), tr);
      }
      case ProcKind::Cond:
        return step(eval_bexpr(c->guard, s) ? c->a : c->b, std::move(s), tr);
      case ProcKind::Repeat: {
        while (sched.take(SchedItem::Kind::Loop, "loop decision").flag)
          s = step(c->a, std::move(s), tr);
        return s;
      }
      case ProcKind::Wait: {
        Rational d = eval_expr(c->expr, s);
        if (d > 0) append(tr, ev_cont(d, const_path(s), {}));
        return s;
      }
      case ProcKind::Ode: {
        if (!eval_bexpr(c->guard, s)) return s;
        FreshNames scratch;
        OdeSolution sol = solve_ode(c->eqs, c->guard, scratch);
        auto bound = concrete_boundary(sol, c->guard, s);
        if (!bound)
          throw DivergenceError("continuous evolution never leaves its domain");
        ContPath p = solution_path(s, sol);
        append(tr, ev_cont(*bound, p, {}));
        return path_state_at(p, *bound);
      }
      case ProcKind::Interrupt: {
        RdySet r = comm_rdy(c->comms);
        bool domain_holds = eval_bexpr(c->guard, s);
        FreshNames scratch;
        OdeSolution sol = solve_ode(c->eqs, c->guard, scratch);
        std::optional<Rational> bound;
        if (domain_holds) bound = concrete_boundary(sol, c->guard, s);
        SupplyCtx ctx;
        ctx.kind = SchedItem::Kind::IntComm;
        ctx.interrupt_choice = true;
        ctx.branches = (int)c->comms.size();
        ctx.domain_holds = domain_holds;
        std::vector<bool> is_input;
        for (const auto& b : c->comms) is_input.push_back(b.is_input);
        ctx.branch_is_input = &is_input;
        if (!domain_holds) {
          ctx.has_bound = true;
          ctx.bound = Rational(0);
        } else if (bound) {
          ctx.has_bound = true;
          ctx.bound = *bound;
        }
        const SchedItem& it = sched.take_ctx(ctx, "interrupt choice");
        if (it.kind == SchedItem::Kind::Boundary) {
          if (!domain_holds) return step(c->a, std::move(s), tr);
          if (!bound)
            throw DivergenceError("interrupt evolution never leaves its domain");
          ContPath p = solution_path(s, sol);
          append(tr, ev_cont(*bound, p, r));
          return step(c->a, path_state_at(p, *bound), tr);
        }
        if (it.index < 0 || it.index >= (int)c->comms.size())
          throw VerifyError("interrupt branch out of range");
        const CommBranch& br = c->comms[it.index];
        Rational d = it.amount;
        if (d < 0) throw VerifyError("negative delay in schedule");
        if (d > 0 || it.flag) {
          if (!domain_holds)
            throw VerifyError("schedule waits inside an interrupt whose domain fails");
          if (it.flag) {
            if (it.amount < 0 || it.amount > 1)
              throw VerifyError("interrupt delay fraction out of [0,1]");
            d = bound ? Rational(*bound * it.amount) : it.amount;
          }
          if (bound && d > *bound)
            throw VerifyError("schedule waits past the interrupt boundary");
          if (d > 0) {
            ContPath p = solution_path(s, sol);
            append(tr, ev_cont(d, p, r));
            s = path_state_at(p, d);
          }
        }
        if (br.is_input) {
          Rational v = sched.take(SchedItem::Kind::Value, "interrupt input value").amount;
          append(tr, ev_comm(Dir::In, br.chan, v));
          s.update(br.var, v);
        } else {
          Rational v = eval_expr(br.expr, s);
          append(tr, ev_comm(Dir::Out, br.chan, v));
        }
        return step(br.cont, std::move(s), tr);
      }
      case ProcKind::Parallel:
        throw VerifyError("exec applies to sequential processes only");
    }
    throw VerifyError("unreachable process kind");
  }
};

} // namespace

std::pair<State, Trace> exec(const ProcessPtr& c, const State& s, Schedule& sched) {
  if (!is_sequential(c)) throw VerifyError("exec applies to sequential processes only");
  Executor ex{sched};
  return ex.run(c, s);
}

// --- trace synchronization ----------------------------------------------------

namespace {

struct Syncer {
  const std::set<std::string>& cs;

  std::vector<Trace> results;
  std::set<std::string> seen;

  void emit(Trace tr) {
    std::string key = trace_key(tr);
    if (seen.insert(key).second) results.push_back(std::move(tr));
  }

  static Trace cons(Event e, const Trace& rest) {
    Trace out;
    out.events.push_back(std::move(e));
    concat_static(out, rest);
    return out;
  }

  static void concat_static(Trace& tr, const Trace& more) {
    tr.events.insert(tr.events.end(), more.events.begin(), more.events.end());
    tr.deadlock = more.deadlock;
  }

  static Trace tail_of(const Trace& tr) {
    Trace out;
    out.events.assign(tr.events.begin() + 1, tr.events.end());
    out.deadlock = tr.deadlock;
    return out;
  }

  std::vector<Trace> sync(const Trace& t1, const Trace& t2) {
    std::vector<Trace> out;
    std::set<std::string> dedup;
    auto push = [&](Trace tr) {
      std::string key = trace_key(tr);
      if (dedup.insert(key).second) out.push_back(std::move(tr));
    };

    bool e1 = t1.events.empty();
    bool e2 = t2.events.empty();
    if (e1 && e2) {
      push(Trace{});
      return out;
    }

    const Event* h1 = e1 ? nullptr : &t1.events.front();
    const Event* h2 = e2 ? nullptr : &t2.events.front();

    // one side finished: a pending shared communication or any waiting
    // deadlocks (the tail must still be derivable for a waiting head)
    if (!e1 && e2) {
      if (h1->is_comm && h1->dir != Dir::Sync && cs.count(h1->chan)) {
        Trace d;
        d.deadlock = true;
        push(std::move(d));
      }
      if (!h1->is_comm && !sync(tail_of(t1), t2).empty()) {
        Trace d;
        d.deadlock = true;
        push(std::move(d));
      }
    }
    if (e1 && !e2) {
      if (h2->is_comm && h2->dir != Dir::Sync && cs.count(h2->chan)) {
        Trace d;
        d.deadlock = true;
        push(std::move(d));
      }
      if (!h2->is_comm && !sync(t1, tail_of(t2)).empty()) {
        Trace d;
        d.deadlock = true;
        push(std::move(d));
      }
    }

    // handshake over a shared channel
    if (h1 && h2 && h1->is_comm && h2->is_comm && h1->chan == h2->chan &&
        cs.count(h1->chan) && h1->value == h2->value &&
        ((h1->dir == Dir::Out && h2->dir == Dir::In) ||
         (h1->dir == Dir::In && h2->dir == Dir::Out))) {
      for (const auto& r : sync(tail_of(t1), tail_of(t2)))
        push(cons(ev_comm(Dir::Sync, h1->chan, h1->value), r));
    }

    // non-shared (or already synchronized) communications pass through
    if (h1 && h1->is_comm && (h1->dir == Dir::Sync || !cs.count(h1->chan))) {
      for (const auto& r : sync(tail_of(t1), t2)) push(cons(*h1, r));
    }
    if (h2 && h2->is_comm && (h2->dir == Dir::Sync || !cs.count(h2->chan))) {
      for (const auto& r : sync(t1, tail_of(t2))) push(cons(*h2, r));
    }

    // time passes jointly when no shared handshake is enabled
    if (h1 && h2 && !h1->is_comm && !h2->is_comm && compat(h1->rdy, h2->rdy, cs)) {
      RdySet merged_rdy;
      for (const auto& p : h1->rdy)
        if (!cs.count(p.first)) merged_rdy.insert(p);
      for (const auto& p : h2->rdy)
        if (!cs.count(p.first)) merged_rdy.insert(p);
      ContPath merged{merge_disjoint(h1->path.start, h2->path.start), {}};
      for (const auto& [v, e] : h1->path.sol) merged.sol.emplace(v, e);
      for (const auto& [v, e] : h2->path.sol) {
        if (merged.sol.count(v)) throw VerifyError("overlapping path variable: " + v);
        merged.sol.emplace(v, e);
      }
      if (h1->dur == h2->dur) {
        for (const auto& r : sync(tail_of(t1), tail_of(t2)))
          push(cons(ev_cont(h1->dur, merged, merged_rdy), r));
      } else {
        const Trace& longer = h1->dur > h2->dur ? t1 : t2;
        const Trace& shorter = h1->dur > h2->dur ? t2 : t1;
        const Event& lh = longer.events.front();
        const Event& sh = shorter.events.front();
        Rational d2 = sh.dur;
        // remainder of the longer block, re-based to start at time d2
        ContPath shifted = lh.path;
        std::map<std::string, ExprPtr> shift{{kPathTime, add(bvar(kPathTime), num(d2))}};
        for (auto& [v, e] : shifted.sol) e = simplify(subst_bound(e, shift));
        Trace rest_long = tail_of(longer);
        Trace rem;
        rem.events.push_back(ev_cont(lh.dur - d2, shifted, lh.rdy));
        concat_static(rem, rest_long);
        for (const auto& r : h1->dur > h2->dur ? sync(rem, tail_of(shorter))
                                               : sync(tail_of(shorter), rem))
          push(cons(ev_cont(d2, merged, merged_rdy), r));
      }
    }
    return out;
  }
};

} // namespace

std::vector<Trace> sync_traces(const Trace& tr1, const std::set<std::string>& cs,
                               const Trace& tr2) {
  Syncer sy{cs};
  std::vector<Trace> out = sy.sync(tr1, tr2);
  std::sort(out.begin(), out.end(), [](const Trace& a, const Trace& b) {
    if (a.deadlock != b.deadlock) return !a.deadlock;
    return trace_key(a) < trace_key(b);
  });
  return out;
}

std::pair<State, Trace> exec_parallel(const ProcessPtr& pc, const State& s,
                                      Schedule& sched) {
  if (is_sequential(pc)) return exec(pc, s, sched);

  auto run_side = [&](const ProcessPtr& side) {
    std::set<std::string> vars = free_vars(side);
    State sub;
    for (const auto& v : vars) sub.update(v, s.lookup(v));
    if (is_sequential(side)) return exec(side, sub, sched);
    return exec_parallel(side, sub, sched);
  };

  std::set<std::string> lv = free_vars(pc->a), rv = free_vars(pc->b);
  for (const auto& v : lv)
    if (rv.count(v)) throw VerifyError("parallel components share variable: " + v);

  auto [s1, tr1] = run_side(pc->a);
  auto [s2, tr2] = run_side(pc->b);

  std::vector<Trace> synced = sync_traces(tr1, pc->chanset, tr2);
  std::vector<Trace> ok;
  for (auto& t : synced)
    if (!t.deadlock) ok.push_back(std::move(t));
  if (ok.empty())
    throw DeadlockError("no deadlock-free synchronization of the component traces");

  int pick = 0;
  if (ok.size() > 1 && sched.next_is(SchedItem::Kind::SyncPick))
    pick = sched.take(SchedItem::Kind::SyncPick, "synchronization pick").index;
  if (pick < 0 || pick >= (int)ok.size())
    throw VerifyError("synchronization pick out of range");
  return {merge_disjoint(s1, s2), ok[pick]};
}

} // namespace hcspver
