#include "assertions/rewrite.hpp"

namespace hcspver {

namespace {

std::map<std::string, ExprPtr> as_map(
    const std::vector<std::pair<std::string, ExprPtr>>& subs) {
  std::map<std::string, ExprPtr> m;
  for (const auto& [x, e] : subs) m.emplace(x, e);
  return m;
}

Binder binder_push(const Binder& b,
                   const std::vector<std::pair<std::string, ExprPtr>>& subs) {
  return Binder{b.dvar, b.vvar, push_subst(b.body, subs)};
}

} // namespace

AssertionPtr push_subst(const AssertionPtr& a,
                        const std::vector<std::pair<std::string, ExprPtr>>& subs) {
  if (subs.empty()) return a;
  auto m = as_map(subs);
  switch (a->kind) {
    case AKind::True:
    case AKind::False:
      return a;
    case AKind::Init:
    case AKind::Rec:
    case AKind::Sync:
    case AKind::Hole:
    case AKind::Subst:
      return a_subst(a, subs);
    case AKind::Conj:
      return a_conj(push_subst(a->a, subs), push_subst(a->b, subs));
    case AKind::Disj:
      return a_disj(push_subst(a->a, subs), push_subst(a->b, subs));
    case AKind::Bool:
      return a_bool(subst_vars(a->guard, m), push_subst(a->a, subs));
    case AKind::WaitIn:
      return a_wait_in(path_subst(a->path, m), a->chan, binder_push(a->body, subs));
    case AKind::WaitOutv:
      return a_wait_outv(path_subst(a->path, m), a->chan,
                         simplify(subst_vars(a->expr, m)), binder_push(a->body, subs));
    case AKind::Wait:
      return a_wait(path_subst(a->path, m), simplify(subst_vars(a->expr, m)),
                    binder_push(a->body, subs));
    case AKind::Interrupt: {
      std::vector<CommSpec> cm;
      for (const auto& c : a->cm) {
        CommSpec d = c;
        if (!d.is_input) d.value.body = simplify(subst_vars(d.value.body, m));
        d.body = binder_push(d.body, subs);
        cm.push_back(std::move(d));
      }
      return a_interrupt(path_subst(a->path, m), simplify(subst_vars(a->expr, m)),
                         binder_push(a->body, subs), std::move(cm));
    }
    case AKind::InterruptInf: {
      std::vector<CommSpec> cm;
      for (const auto& c : a->cm) {
        CommSpec d = c;
        if (!d.is_input) d.value.body = simplify(subst_vars(d.value.body, m));
        d.body = binder_push(d.body, subs);
        cm.push_back(std::move(d));
      }
      return a_interrupt_inf(path_subst(a->path, m), std::move(cm));
    }
  }
  throw VerifyError("unreachable assertion kind");
}

namespace {

AssertionPtr subst_bound_in_assertion(const AssertionPtr& a,
                                      const std::map<std::string, ExprPtr>& sub) {
  switch (a->kind) {
    case AKind::True:
    case AKind::False:
    case AKind::Init:
    case AKind::Hole:
      return a;
    default: break;
  }
  Assertion out = *a;
  if (out.a) out.a = subst_bound_in_assertion(out.a, sub);
  if (out.b) out.b = subst_bound_in_assertion(out.b, sub);
  if (out.guard) out.guard = subst_bound(out.guard, sub);
  for (auto& [v, e] : out.subs) e = simplify(subst_bound(e, sub));
  for (auto& [v, e] : out.path.sol) e = simplify(subst_bound(e, sub));
  if (out.expr) out.expr = simplify(subst_bound(out.expr, sub));
  if (out.body.body) out.body.body = subst_bound_in_assertion(out.body.body, sub);
  for (auto& c : out.cm) {
    if (c.value.body) c.value.body = simplify(subst_bound(c.value.body, sub));
    c.body.body = subst_bound_in_assertion(c.body.body, sub);
  }
  return std::make_shared<Assertion>(std::move(out));
}

Binder shift_binder(const Binder& b, const ExprPtr& d, FreshNames& fresh) {
  std::string nd = fresh.fresh_bound("d");
  std::map<std::string, ExprPtr> shift{{b.dvar, simplify(add(bvar(nd), d))}};
  return Binder{nd, b.vvar, subst_bound_in_assertion(b.body, shift)};
}

ExprBinder shift_expr_binder(const ExprBinder& f, const ExprPtr& d, FreshNames& fresh) {
  std::string nd = fresh.fresh_bound("d");
  std::map<std::string, ExprPtr> shift{{f.dvar, simplify(add(bvar(nd), d))}};
  return ExprBinder{nd, simplify(subst_bound(f.body, shift))};
}

std::vector<CommSpec> delay_cm(const std::vector<CommSpec>& cm, const ExprPtr& d,
                               FreshNames& fresh) {
  std::vector<CommSpec> out;
  for (const auto& c : cm) {
    CommSpec n = c;
    if (!n.is_input) n.value = shift_expr_binder(n.value, d, fresh);
    n.body = shift_binder(n.body, d, fresh);
    out.push_back(std::move(n));
  }
  return out;
}

} // namespace

AssertionPtr delay_assertion(const ExprPtr& d, const AssertionPtr& a, FreshNames& fresh) {
  ExprPtr ds = simplify(d);
  if (ds->kind == ExprKind::Const && ds->value == 0) return a;
  switch (a->kind) {
    case AKind::Interrupt:
      return a_interrupt(path_delay(a->path, ds), simplify(sub(a->expr, ds)),
                         shift_binder(a->body, ds, fresh), delay_cm(a->cm, ds, fresh));
    case AKind::InterruptInf:
      return a_interrupt_inf(path_delay(a->path, ds), delay_cm(a->cm, ds, fresh));
    case AKind::Wait:
      return a_wait(path_delay(a->path, ds), simplify(sub(a->expr, ds)),
                    shift_binder(a->body, ds, fresh));
    case AKind::WaitIn:
      return a_wait_in(path_delay(a->path, ds), a->chan, shift_binder(a->body, ds, fresh));
    case AKind::WaitOutv:
      return a_wait_outv(path_delay(a->path, ds), a->chan, a->expr,
                         shift_binder(a->body, ds, fresh));
    default:
      throw VerifyError("delay applies to waiting-family assertions only, got: " +
                        assertion_str(a));
  }
}

AssertionPtr normalize(const AssertionPtr& a) {
  switch (a->kind) {
    case AKind::True:
    case AKind::False:
    case AKind::Init:
    case AKind::Hole:
      return a;
    case AKind::Conj: return a_conj(normalize(a->a), normalize(a->b));
    case AKind::Disj: return a_disj(normalize(a->a), normalize(a->b));
    case AKind::Bool: {
      AssertionPtr inner = normalize(a->a);
      if (inner->kind == AKind::Bool)
        return normalize(a_bool(simplify(band(a->guard, inner->guard)), inner->a));
      // keep guards on the disjuncts so each case is a separate branch
      if (inner->kind == AKind::Disj)
        return a_disj(normalize(a_bool(a->guard, inner->a)),
                      normalize(a_bool(a->guard, inner->b)));
      return a_bool(a->guard, inner);
    }
    case AKind::Subst: return a_subst(normalize(a->a), a->subs);
    case AKind::Rec: return a_rec(normalize(a->a), normalize(a->b));
    case AKind::Sync: return a_sync(a->chs, normalize(a->a), normalize(a->b));
    case AKind::WaitIn: {
      AssertionPtr body = normalize(a->body.body);
      if (body->kind == AKind::False) return a_false();
      return a_wait_in(a->path, a->chan, Binder{a->body.dvar, a->body.vvar, body});
    }
    case AKind::WaitOutv: {
      AssertionPtr body = normalize(a->body.body);
      if (body->kind == AKind::False) return a_false();
      return a_wait_outv(a->path, a->chan, a->expr,
                         Binder{a->body.dvar, a->body.vvar, body});
    }
    case AKind::Wait: {
      AssertionPtr body = normalize(a->body.body);
      if (body->kind == AKind::False) return a_false();
      return a_wait(a->path, a->expr, Binder{a->body.dvar, a->body.vvar, body});
    }
    case AKind::Interrupt: {
      Binder tail{a->body.dvar, a->body.vvar, normalize(a->body.body)};
      std::vector<CommSpec> cm;
      bool all_false = tail.body->kind == AKind::False;
      for (const auto& c : a->cm) {
        CommSpec n = c;
        n.body.body = normalize(n.body.body);
        all_false = all_false && n.body.body->kind == AKind::False;
        cm.push_back(std::move(n));
      }
      if (all_false) return a_false();
      if (cm.empty()) return a_wait(a->path, a->expr, std::move(tail));
      return a_interrupt(a->path, a->expr, std::move(tail), std::move(cm));
    }
    case AKind::InterruptInf: {
      std::vector<CommSpec> cm;
      bool all_false = true;
      for (const auto& c : a->cm) {
        CommSpec n = c;
        n.body.body = normalize(n.body.body);
        all_false = all_false && n.body.body->kind == AKind::False;
        cm.push_back(std::move(n));
      }
      if (cm.empty() || all_false) return a_false(); // nothing can ever happen
      if (cm.size() == 1 && cm[0].is_input)
        return a_wait_in(a->path, cm[0].chan, cm[0].body);
      if (cm.size() == 1 && !cm[0].is_input) {
        std::set<std::string> bound;
        collect_expr_vars(cm[0].value.body, nullptr, &bound);
        if (!bound.count(cm[0].value.dvar))
          return a_wait_outv(a->path, cm[0].chan, cm[0].value.body, cm[0].body);
      }
      return a_interrupt_inf(a->path, std::move(cm));
    }
  }
  throw VerifyError("unreachable assertion kind");
}

namespace {

AssertionPtr rewrite_at(const AssertionPtr& a, const Position& pos, size_t k,
                        const AssertionPtr& replacement) {
  if (k == pos.size()) return replacement;
  int step = pos[k];
  Assertion out = *a;
  auto recurse = [&](const AssertionPtr& child) {
    return rewrite_at(child, pos, k + 1, replacement);
  };
  switch (a->kind) {
    case AKind::Conj:
    case AKind::Disj:
    case AKind::Rec:
    case AKind::Sync:
      if (step == 0) out.a = recurse(a->a);
      else if (step == 1) out.b = recurse(a->b);
      else throw VerifyError("invalid rewrite position");
      break;
    case AKind::Bool:
    case AKind::Subst:
      if (step != 0) throw VerifyError("invalid rewrite position");
      out.a = recurse(a->a);
      break;
    case AKind::WaitIn:
    case AKind::WaitOutv:
    case AKind::Wait:
      if (step != 0) throw VerifyError("invalid rewrite position");
      out.body.body = recurse(a->body.body);
      break;
    case AKind::Interrupt:
      if (step == 0) out.body.body = recurse(a->body.body);
      else if (step >= 1 && step <= (int)a->cm.size())
        out.cm[step - 1].body.body = recurse(a->cm[step - 1].body.body);
      else throw VerifyError("invalid rewrite position");
      break;
    case AKind::InterruptInf:
      if (step >= 0 && step < (int)a->cm.size())
        out.cm[step].body.body = recurse(a->cm[step].body.body);
      else throw VerifyError("invalid rewrite position");
      break;
    default:
      throw VerifyError("invalid rewrite position");
  }
  return std::make_shared<Assertion>(std::move(out));
}

} // namespace

AssertionPtr mono_rewrite(const AssertionPtr& a, const std::vector<LocalRewrite>& rws) {
  AssertionPtr acc = a;
  for (const auto& rw : rws) acc = rewrite_at(acc, rw.pos, 0, rw.replacement);
  return acc;
}

} // namespace hcspver
