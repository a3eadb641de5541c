#include "semantics/satisfies.hpp"

namespace hcspver {

namespace {

struct Checker {
  const Trace& tr;
  long rec_bound;
  const std::set<std::string>* auto_def = nullptr;

  // binds guard-defined boundary times (atoms v = e) before evaluation
  State augment(const State& s0, const BExprPtr& guard) const {
    if (!auto_def) return s0;
    State out = s0;
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<BExprPtr> todo{guard};
      while (!todo.empty()) {
        BExprPtr b = todo.back();
        todo.pop_back();
        if (b->kind == BKind::And) {
          for (const auto& x : b->args) todo.push_back(x);
          continue;
        }
        if (b->kind != BKind::Cmp || b->op != CmpOp::Eq) continue;
        for (bool flip : {false, true}) {
          const ExprPtr& v = flip ? b->rhs : b->lhs;
          const ExprPtr& e = flip ? b->lhs : b->rhs;
          if (v->kind != ExprKind::Var || !auto_def->count(v->name) || out.has(v->name))
            continue;
          try {
            Rational val = eval_expr(e, out);
            out.update(v->name, val);
            changed = true;
          } catch (const VerifyError&) {
          }
        }
      }
    }
    return out;
  }

  size_t skip_syncs(size_t i) const {
    while (i < tr.events.size() && tr.events[i].is_comm &&
           tr.events[i].dir == Dir::Sync)
      ++i;
    return i;
  }

  bool at_end(size_t i) const { return skip_syncs(i) == tr.events.size(); }

  const Event* comm_at(size_t i, Dir dir, const std::string& chan) const {
    size_t k = skip_syncs(i);
    if (k >= tr.events.size()) return nullptr;
    const Event& e = tr.events[k];
    if (e.is_comm && e.dir == dir && e.chan == chan) return &e;
    return nullptr;
  }

  const Event* cont_at(size_t i) const {
    size_t k = skip_syncs(i);
    if (k >= tr.events.size()) return nullptr;
    const Event& e = tr.events[k];
    return e.is_comm ? nullptr : &e;
  }

  size_t advance(size_t i) const { return skip_syncs(i) + 1; }

  // (s0, t, p(t)) |= I for every t in [0, dur]: polynomial identity over the
  // full state domain. Auto-bound boundary times are not state coordinates.
  bool path_matches(const State& s0_full, const Event& cont,
                    const PathAssertion& I) const {
    State s0 = s0_full;
    if (auto_def)
      for (const auto& n : *auto_def) s0.values.erase(n);
    if (cont.path.start.values.size() != s0.values.size()) return false;
    for (const auto& [v, _] : s0.values)
      if (!cont.path.start.has(v)) return false;
    for (const auto& [v, e] : I.sol)
      if (!s0.has(v)) return false;
    for (const auto& [v, init] : s0.values) {
      std::vector<Rational> expect, got;
      auto it = I.sol.find(v);
      if (it != I.sol.end())
        expect = poly_in_bound(it->second, kPathTime, s0_full);
      else
        expect = {init};
      auto jt = cont.path.sol.find(v);
      if (jt != cont.path.sol.end())
        got = poly_in_bound(jt->second, kPathTime, cont.path.start);
      else
        got = {cont.path.start.lookup(v)};
      while (expect.size() > 1 && expect.back() == 0) expect.pop_back();
      while (got.size() > 1 && got.back() == 0) got.pop_back();
      if (expect != got) return false;
    }
    return true;
  }

  bool check(const State& s0, const State& s, size_t i, const AssertionPtr& a) const {
    if (tr.deadlock) return a->kind == AKind::True;
    switch (a->kind) {
      case AKind::True: return true;
      case AKind::False: return false;
      case AKind::Hole: throw VerifyError("satisfies: open recursion hole");
      case AKind::Sync:
        throw VerifyError("satisfies: unresolved sync residual; synchronize first");
      case AKind::Init: {
        if (!at_end(i)) return false;
        if (s == s0) return true;
        // ignore auto-bound variables the final state never carries
        if (!auto_def) return false;
        State trimmed = s0;
        for (const auto& n : *auto_def) trimmed.values.erase(n);
        return s == trimmed;
      }
      case AKind::Conj: return check(s0, s, i, a->a) && check(s0, s, i, a->b);
      case AKind::Disj: return check(s0, s, i, a->a) || check(s0, s, i, a->b);
      case AKind::Bool: {
        State s0a = augment(s0, a->guard);
        return eval_bexpr(a->guard, s0a) && check(s0a, s, i, a->a);
      }
      case AKind::Subst: {
        State s0p = s0;
        for (const auto& [x, e] : a->subs) s0p.update(x, eval_expr(e, s0));
        return check(s0p, s, i, a->a);
      }
      case AKind::WaitIn: {
        if (const Event* c = comm_at(i, Dir::In, a->chan)) {
          AssertionPtr body = binder_apply(a->body, num(0), num(c->value));
          if (check(s0, s, advance(i), body)) return true;
        }
        if (const Event* w = cont_at(i)) {
          if (w->rdy == RdySet{{a->chan, true}} && path_matches(s0, *w, a->path)) {
            size_t j = advance(i);
            if (const Event* c = comm_at(j, Dir::In, a->chan)) {
              AssertionPtr body = binder_apply(a->body, num(w->dur), num(c->value));
              if (check(s0, s, advance(j), body)) return true;
            }
          }
        }
        return false;
      }
      case AKind::WaitOutv: {
        Rational v = eval_expr(a->expr, s0);
        if (const Event* c = comm_at(i, Dir::Out, a->chan)) {
          if (c->value == v) {
            AssertionPtr body = binder_apply(a->body, num(0));
            if (check(s0, s, advance(i), body)) return true;
          }
        }
        if (const Event* w = cont_at(i)) {
          if (w->rdy == RdySet{{a->chan, false}} && path_matches(s0, *w, a->path)) {
            size_t j = advance(i);
            if (const Event* c = comm_at(j, Dir::Out, a->chan)) {
              if (c->value == v) {
                AssertionPtr body = binder_apply(a->body, num(w->dur));
                if (check(s0, s, advance(j), body)) return true;
              }
            }
          }
        }
        return false;
      }
      case AKind::Wait: {
        Rational e = eval_expr(a->expr, s0);
        if (e > 0) {
          const Event* w = cont_at(i);
          if (!w || w->dur != e || !w->rdy.empty() || !path_matches(s0, *w, a->path))
            return false;
          return check(s0, s, advance(i), binder_apply(a->body, num(e)));
        }
        return check(s0, s, i, binder_apply(a->body, num(0)));
      }
      case AKind::Interrupt: {
        Rational e = eval_expr(a->expr, s0);
        RdySet r = rdy(a->cm);
        // stop at the maximum waiting time
        if (e > 0) {
          if (const Event* w = cont_at(i)) {
            if (w->dur == e && w->rdy == r && path_matches(s0, *w, a->path) &&
                check(s0, s, advance(i), binder_apply(a->body, num(e))))
              return true;
          }
        } else {
          if (check(s0, s, i, binder_apply(a->body, num(0)))) return true;
        }
        if (comm_fires(s0, s, i, a->cm, r, &e, a->path)) return true;
        return false;
      }
      case AKind::InterruptInf:
        return comm_fires(s0, s, i, a->cm, rdy(a->cm), nullptr, a->path);
      case AKind::Rec: {
        long bound = rec_bound >= 0 ? rec_bound
                                    : static_cast<long>(tr.events.size()) + 8;
        AssertionPtr unfolded = a->a;
        if (check(s0, s, i, unfolded)) return true;
        for (long n = 1; n <= bound; ++n) {
          unfolded = fill_hole(a->b, unfolded);
          if (check(s0, s, i, unfolded)) return true;
        }
        return false;
      }
    }
    throw VerifyError("unreachable assertion kind");
  }

  // interruption by one of the communications, immediately or after waiting
  bool comm_fires(const State& s0, const State& s, size_t i,
                  const std::vector<CommSpec>& cm, const RdySet& r, const Rational* e,
                  const PathAssertion& path) const {
    for (const auto& c : cm) {
      Dir dir = c.is_input ? Dir::In : Dir::Out;
      if (const Event* ev = comm_at(i, dir, c.chan)) {
        bool value_ok = c.is_input;
        if (!c.is_input) {
          Rational v = eval_expr(expr_binder_apply(c.value, num(0)), s0);
          value_ok = ev->value == v;
        }
        if (value_ok) {
          AssertionPtr body =
              c.is_input ? binder_apply(c.body, num(0), num(ev->value))
                         : binder_apply(c.body, num(0));
          if (check(s0, s, advance(i), body)) return true;
        }
      }
      if (const Event* w = cont_at(i)) {
        if (w->rdy != r || !path_matches(s0, *w, path)) continue;
        if (e && (w->dur <= 0 || w->dur > *e)) continue;
        size_t j = advance(i);
        if (const Event* ev = comm_at(j, dir, c.chan)) {
          bool value_ok = c.is_input;
          if (!c.is_input) {
            Rational v = eval_expr(expr_binder_apply(c.value, num(w->dur)), s0);
            value_ok = ev->value == v;
          }
          if (value_ok) {
            AssertionPtr body =
                c.is_input ? binder_apply(c.body, num(w->dur), num(ev->value))
                           : binder_apply(c.body, num(w->dur));
            if (check(s0, s, advance(j), body)) return true;
          }
        }
      }
    }
    return false;
  }
};

} // namespace

bool satisfies(const State& s0, const State& s, const Trace& tr, const AssertionPtr& a,
               long rec_bound, const std::set<std::string>* auto_def) {
  Checker ck{tr, rec_bound, auto_def};
  return ck.check(s0, s, 0, a);
}

} // namespace hcspver
