#include "sync/engine.hpp"

#include "core/smtlib.hpp"

#include <algorithm>

namespace hcspver {

// --- prefixing ----------------------------------------------------------------

namespace {

ExprPtr rename_expr(const ExprPtr& e, const std::string& prefix) {
  if (!e) return e;
  std::set<std::string> names;
  collect_expr_vars(e, &names, nullptr);
  std::map<std::string, ExprPtr> sub;
  for (const auto& n : names) sub.emplace(n, var(prefix + n));
  return subst_vars(e, sub);
}

BExprPtr rename_bexpr(const BExprPtr& b, const std::string& prefix) {
  if (!b) return b;
  std::set<std::string> names;
  collect_bexpr_vars(b, &names, nullptr);
  std::map<std::string, ExprPtr> sub;
  for (const auto& n : names) sub.emplace(n, var(prefix + n));
  return subst_vars(b, sub);
}

AssertionPtr rename_assertion(const AssertionPtr& a, const std::string& prefix) {
  switch (a->kind) {
    case AKind::True:
    case AKind::False:
    case AKind::Init:
    case AKind::Hole:
      return a;
    default: break;
  }
  Assertion out = *a;
  if (out.a) out.a = rename_assertion(out.a, prefix);
  if (out.b) out.b = rename_assertion(out.b, prefix);
  out.guard = rename_bexpr(out.guard, prefix);
  for (auto& [x, e] : out.subs) {
    x = prefix + x;
    e = rename_expr(e, prefix);
  }
  {
    std::map<std::string, ExprPtr> renamed;
    for (const auto& [v, e] : out.path.sol)
      renamed.emplace(prefix + v, rename_expr(e, prefix));
    out.path.sol = std::move(renamed);
  }
  if (out.expr) out.expr = rename_expr(out.expr, prefix);
  if (out.body.body) out.body.body = rename_assertion(out.body.body, prefix);
  for (auto& c : out.cm) {
    if (c.value.body) c.value.body = rename_expr(c.value.body, prefix);
    c.body.body = rename_assertion(c.body.body, prefix);
  }
  return std::make_shared<Assertion>(std::move(out));
}

} // namespace

NamedAssertion prefix_process(const std::string& name, const SpecResult& spec,
                              std::set<std::string>& used_names) {
  if (name.empty()) throw VerifyError("process name must be nonempty");
  if (!used_names.insert(name).second)
    throw VerifyError("process name already used: " + name);
  NamedAssertion out;
  out.prefixes = {name};
  out.assertion = rename_assertion(spec.assertion, name);
  for (const auto& fv : spec.fresh_vars)
    out.fresh_vars.push_back({name + fv.name, rename_bexpr(fv.constraint, name),
                              fv.closed_form ? rename_expr(fv.closed_form, name)
                                             : nullptr});
  return out;
}

ExprPtr lift(const ExprPtr& e, const std::set<std::string>& prefixes) {
  std::set<std::string> names;
  collect_expr_vars(e, &names, nullptr);
  for (const auto& n : names) {
    bool ok = false;
    for (const auto& p : prefixes)
      if (n.rfind(p, 0) == 0) { ok = true; break; }
    if (!ok)
      throw VerifyError("expression mixes component states: variable " + n + " in " +
                        expr_str(e));
  }
  return e;
}

BExprPtr lift(const BExprPtr& b, const std::set<std::string>& prefixes) {
  std::set<std::string> names;
  collect_bexpr_vars(b, &names, nullptr);
  for (const auto& n : names) {
    bool ok = false;
    for (const auto& p : prefixes)
      if (n.rfind(p, 0) == 0) { ok = true; break; }
    if (!ok)
      throw VerifyError("condition mixes component states: variable " + n + " in " +
                        bexpr_str(b));
  }
  return b;
}

bool compat_cm(const std::vector<CommSpec>& cm1, const std::vector<CommSpec>& cm2,
               const std::set<std::string>& chs) {
  for (const auto& a : cm1)
    for (const auto& b : cm2)
      if (a.chan == b.chan && chs.count(a.chan) && a.is_input != b.is_input)
        return false;
  return true;
}

// --- engine -------------------------------------------------------------------

SyncEngine::SyncEngine(FreshNames& fresh, SmtSolver& solver, Options opt)
    : fresh_(fresh), solver_(solver), opt_(std::move(opt)) {
  if (!opt_.rec_cond) opt_.rec_cond = btrue();
}

namespace {

// The e1-vs-e2 comparison guards, folded for infinite times.
BExprPtr lt_guard(const ExprPtr& e1, const ExprPtr& e2) {
  if (!e1) return bfalse(); // infinity is smaller than nothing
  if (!e2) return btrue();  // e1 < infinity, and infinity > 0
  return band(cmp(CmpOp::Lt, e1, e2), cmp(CmpOp::Gt, e2, num(0)));
}

BExprPtr eq_guard(const ExprPtr& e1, const ExprPtr& e2) {
  if (!e1 || !e2) return bfalse();
  return bor(cmp(CmpOp::Eq, e1, e2),
             band(cmp(CmpOp::Le, e1, num(0)), cmp(CmpOp::Le, e2, num(0))));
}

BExprPtr tail_range(const ExprPtr& d, const ExprPtr& e) {
  return bor(band(cmp(CmpOp::Gt, e, num(0)), cmp(CmpOp::Eq, d, e)),
             band(cmp(CmpOp::Le, e, num(0)), cmp(CmpOp::Eq, d, num(0))));
}

BExprPtr comm_range(const ExprPtr& d, const ExprPtr& bound) {
  BExprPtr lo = cmp(CmpOp::Ge, d, num(0));
  if (!bound) return lo;
  return band(std::move(lo), cmp(CmpOp::Le, d, bound));
}

} // namespace

namespace {

std::optional<SyncEngine::View> view_of(const AssertionPtr& a, FreshNames& fresh) {
  SyncEngine::View v;
  v.original = a;
  switch (a->kind) {
    case AKind::WaitIn:
      v.path = a->path;
      v.cm = {CommSpec{true, a->chan, {}, a->body}};
      return v;
    case AKind::WaitOutv:
      v.path = a->path;
      v.cm = {CommSpec{false, a->chan, ExprBinder{fresh.fresh_bound("d"), a->expr},
                       a->body}};
      return v;
    case AKind::Wait:
      v.path = a->path;
      v.e = a->expr;
      v.tail = a->body;
      return v;
    case AKind::Interrupt:
      v.path = a->path;
      v.e = a->expr;
      v.tail = a->body;
      v.cm = a->cm;
      return v;
    case AKind::InterruptInf:
      v.path = a->path;
      v.cm = a->cm;
      return v;
    default:
      return std::nullopt;
  }
}

} // namespace

void SyncEngine::emit(Obligation ob) {
  std::string key = std::to_string(static_cast<int>(ob.expect)) + "|" +
                    bexpr_str(ob.hyp) + "|" + bexpr_str(ob.goal);
  if (!obligation_keys_.insert(key).second) return;
  obligations_.push_back(std::move(ob));
}

void SyncEngine::leaf_kept(const BExprPtr& cond) {
  if (counting_) ++iter_stats_.branches_kept;
  ++branch_counter_;
  if (!is_true(opt_.rec_cond)) {
    emit({"loop-invariant preservation, branch " + std::to_string(branch_counter_),
          cond, opt_.rec_cond, Obligation::Expect::Valid});
  }
  if (opt_.goal) {
    emit({"safety goal, branch " + std::to_string(branch_counter_), cond, opt_.goal,
          Obligation::Expect::Valid});
  }
}

bool SyncEngine::prune(const BExprPtr& cond, const BExprPtr& guard,
                       const std::string& origin) {
  BExprPtr phi = simplify(band(cond, guard));
  if (is_false(phi)) {
    if (counting_) ++iter_stats_.branches_pruned;
    emit({origin, phi, bfalse(), Obligation::Expect::Unsat});
    return true;
  }
  // propositional sign analysis over a conjunction of comparisons
  bool decided = false;
  try {
    BExprPtr n = nnf(phi);
    if (n->kind == BKind::And || n->kind == BKind::Cmp) {
      std::vector<BExprPtr> atoms =
          n->kind == BKind::Cmp ? std::vector<BExprPtr>{n} : n->args;
      // sign sets over lhs-rhs: bit0 neg, bit1 zero, bit2 pos
      std::map<std::string, int> allowed;
      auto sign_bits = [](CmpOp op) {
        switch (op) {
          case CmpOp::Lt: return 0b001;
          case CmpOp::Le: return 0b011;
          case CmpOp::Eq: return 0b010;
          case CmpOp::Ge: return 0b110;
          case CmpOp::Gt: return 0b100;
        }
        return 0b111;
      };
      auto flip = [](int bits) {
        return ((bits & 1) << 2) | (bits & 2) | ((bits >> 2) & 1);
      };
      bool all_cmp = true;
      for (const auto& at : atoms) {
        if (at->kind != BKind::Cmp) { all_cmp = false; break; }
        ExprPtr diff = simplify(sub(at->lhs, at->rhs));
        ExprPtr ndiff = simplify(neg(diff));
        std::string k = expr_str(diff), nk = expr_str(ndiff);
        int bits = sign_bits(at->op);
        if (allowed.count(nk) && !allowed.count(k)) {
          k = nk;
          bits = flip(bits);
        }
        auto [it, fresh_key] = allowed.emplace(k, bits);
        if (!fresh_key) it->second &= bits;
        if (it->second == 0) {
          decided = true;
          break;
        }
      }
      (void)all_cmp;
    }
  } catch (const VerifyError&) {
    // quantified conditions skip the syntactic tier
  }
  if (decided) {
    if (counting_) ++iter_stats_.branches_pruned;
    emit({origin, phi, bfalse(), Obligation::Expect::Unsat});
    return true;
  }
  if (solver_.available()) {
    std::string script = to_smtlib(bfalse(), phi);
    if (solver_.check(script) == SmtSolver::Result::Unsat) {
      if (counting_) ++iter_stats_.branches_pruned;
      emit({origin, phi, bfalse(), Obligation::Expect::Unsat});
      return true;
    }
    return false;
  }
  emit({"undecided conflict (kept): " + origin, phi, bfalse(),
        Obligation::Expect::Audit});
  return false;
}

AssertionPtr SyncEngine::synchronize(const std::set<std::string>& chs,
                                     const NamedAssertion& l, const NamedAssertion& r,
                                     const BExprPtr& cond0) {
  for (const auto& p : l.prefixes)
    if (r.prefixes.count(p)) throw VerifyError("duplicate process prefix: " + p);
  chs_ = chs;
  lpref_ = l.prefixes;
  rpref_ = r.prefixes;
  allpref_ = l.prefixes;
  allpref_.insert(r.prefixes.begin(), r.prefixes.end());

  AssertionPtr result =
      normalize(sync(l.assertion, r.assertion, simplify(cond0 ? cond0 : btrue())));
  if (contains_kind(result, AKind::Sync))
    throw VerifyError("internal: synchronization left a residual");
  return result;
}

AssertionPtr SyncEngine::sync(const AssertionPtr& l, const AssertionPtr& r,
                              const BExprPtr& cond) {
  if (l->kind == AKind::False || r->kind == AKind::False) return a_false();

  if (l->kind == AKind::Disj)
    return a_disj(sync(l->a, r, cond), sync(l->b, r, cond));
  if (r->kind == AKind::Disj)
    return a_disj(sync(l, r->a, cond), sync(l, r->b, cond));

  if (l->kind == AKind::Bool) {
    lift(l->guard, allpref_);
    if (prune(cond, l->guard, "branch condition " + bexpr_str(l->guard)))
      return a_false();
    return a_bool(l->guard, sync(l->a, r, simplify(band(cond, l->guard))));
  }
  if (r->kind == AKind::Bool) {
    lift(r->guard, allpref_);
    if (prune(cond, r->guard, "branch condition " + bexpr_str(r->guard)))
      return a_false();
    return a_bool(r->guard, sync(l, r->a, simplify(band(cond, r->guard))));
  }

  if (l->kind == AKind::Subst || r->kind == AKind::Subst) {
    const AssertionPtr& node = l->kind == AKind::Subst ? l : r;
    BExprPtr cond2 = pull_subst_cond(cond, node->subs);
    AssertionPtr inner = l->kind == AKind::Subst ? sync(node->a, r, cond2)
                                                 : sync(l, node->a, cond2);
    return a_subst(inner, node->subs);
  }

  if (l->kind == AKind::Rec && r->kind == AKind::Rec) return rec_rule(l, r, cond);

  if (l->kind == AKind::Hole && r->kind == AKind::Hole) {
    if (!counting_ && premise_mode_ == 0)
      throw VerifyError("recursion hole outside the recursion rule");
    leaf_kept(cond);
    return a_hole(0);
  }
  if (l->kind == AKind::Hole || r->kind == AKind::Hole) {
    int premise = premise_mode_ ? premise_mode_ : (l->kind == AKind::Hole ? 2 : 1);
    throw RecPremiseError(premise,
                          "one side finished its loop while the other iterates again");
  }

  if (l->kind == AKind::Init && r->kind == AKind::Init) return a_init();

  auto vl = view_of(l, fresh_);
  auto vr = view_of(r, fresh_);
  if (vl && vr) return interrupt_sync(*vl, *vr, cond);
  if (l->kind == AKind::Init && vr) return init_sync(*vr, true, cond);
  if (vl && r->kind == AKind::Init) return init_sync(*vl, false, cond);

  if (l->kind == AKind::Rec || r->kind == AKind::Rec)
    throw VerifyError(
        "unsupported synchronization: a loop against a non-loop assertion: " +
        assertion_str(l->kind == AKind::Rec ? r : l));
  throw VerifyError("unsupported synchronization of " + assertion_str(l) + " with " +
                    assertion_str(r));
}

BExprPtr SyncEngine::pull_subst_cond(
    const BExprPtr& cond, const std::vector<std::pair<std::string, ExprPtr>>& subs) {
  for (const auto& [x, e] : subs) lift(e, allpref_);
  std::set<std::string> cond_vars;
  collect_bexpr_vars(cond, &cond_vars, nullptr);
  bool needs_old = false;
  for (const auto& [x, e] : subs) {
    if (cond_vars.count(x)) needs_old = true;
    std::set<std::string> evars;
    collect_expr_vars(e, &evars, nullptr);
    for (const auto& [y, _] : subs)
      if (evars.count(y)) needs_old = true;
  }
  if (!needs_old) {
    BExprPtr out = cond;
    for (const auto& [x, e] : subs) out = band(out, cmp(CmpOp::Eq, var(x), e));
    return simplify(out);
  }
  std::map<std::string, ExprPtr> old;
  std::vector<std::string> names;
  for (const auto& [x, e] : subs) {
    std::string o = fresh_.fresh_var(x + "_pre");
    old.emplace(x, var(o));
    names.push_back(o);
  }
  BExprPtr body = subst_vars(cond, old);
  for (const auto& [x, e] : subs)
    body = band(body, cmp(CmpOp::Eq, var(x), subst_vars(e, old)));
  BExprPtr out = simplify(body);
  for (auto it = names.rbegin(); it != names.rend(); ++it) out = bexists(*it, out);
  return out;
}

AssertionPtr SyncEngine::rec_rule(const AssertionPtr& l, const AssertionPtr& r,
                                  const BExprPtr& cond) {
  AssertionPtr f1 = fill_hole(l->b, a_hole(1));
  AssertionPtr f2 = fill_hole(r->b, a_hole(2));

  struct PremiseGuard {
    int* slot;
    int saved;
    PremiseGuard(int* s, int mode) : slot(s), saved(*s) { *slot = mode; }
    ~PremiseGuard() { *slot = saved; }
  };
  {
    PremiseGuard pg(&premise_mode_, 1);
    AssertionPtr res = sync(l->a, f2, opt_.rec_cond);
    if (res->kind != AKind::False)
      throw RecPremiseError(1, "exit/loop mismatch is satisfiable: " +
                                   assertion_str(res));
  }
  {
    PremiseGuard pg(&premise_mode_, 2);
    AssertionPtr res = sync(f1, r->a, opt_.rec_cond);
    if (res->kind != AKind::False)
      throw RecPremiseError(2, "loop/exit mismatch is satisfiable: " +
                                   assertion_str(res));
  }

  AssertionPtr base = sync(l->a, r->a, cond);

  if (!is_true(opt_.rec_cond))
    emit({"loop-invariant entry", cond, opt_.rec_cond, Obligation::Expect::Valid});

  bool saved = counting_;
  counting_ = true;
  AssertionPtr functional = sync(f1, f2, opt_.rec_cond);
  counting_ = saved;
  iter_stats_.branches_generated =
      iter_stats_.branches_pruned + iter_stats_.branches_kept;
  return a_rec(base, functional);
}

AssertionPtr SyncEngine::comm_pairs(const View& vl, const View& vr,
                                    const BExprPtr& cond) {
  std::vector<AssertionPtr> out;
  for (const auto& c1 : vl.cm) {
    for (const auto& c2 : vr.cm) {
      if (c1.chan != c2.chan || !chs_.count(c1.chan) || c1.is_input == c2.is_input)
        continue;
      if (c1.is_input) {
        ExprPtr v = lift(simplify(expr_binder_apply(c2.value, num(0))), allpref_);
        out.push_back(sync(binder_apply(c1.body, num(0), v),
                           binder_apply(c2.body, num(0)), cond));
      } else {
        ExprPtr v = lift(simplify(expr_binder_apply(c1.value, num(0))), allpref_);
        out.push_back(sync(binder_apply(c1.body, num(0)),
                           binder_apply(c2.body, num(0), v), cond));
      }
    }
  }
  if (out.empty())
    throw VerifyError("internal: incompatible ready sets without a handshake pair");
  return a_disjn(std::move(out));
}

std::vector<CommSpec> SyncEngine::rel_lists(const View& vl, const View& vr,
                                            const BExprPtr& cond, const ExprPtr& bound) {
  std::vector<CommSpec> out;
  auto build = [&](const CommSpec& c, bool left_side) {
    std::string nd = fresh_.fresh_bound("d");
    BExprPtr range = comm_range(bvar(nd), bound);
    BExprPtr cond2 = simplify(band(cond, range));
    AssertionPtr delayed = delay_assertion(
        bvar(nd), left_side ? vr.original : vl.original, fresh_);
    if (c.is_input) {
      std::string nv = fresh_.fresh_bound("v");
      AssertionPtr applied = binder_apply(c.body, bvar(nd), bvar(nv));
      AssertionPtr body = left_side ? sync(applied, delayed, cond2)
                                    : sync(delayed, applied, cond2);
      out.push_back(CommSpec{true, c.chan, {}, Binder{nd, nv, body}});
    } else {
      std::string fd = fresh_.fresh_bound("d");
      ExprPtr fval = lift(simplify(expr_binder_apply(c.value, bvar(fd))), allpref_);
      AssertionPtr applied = binder_apply(c.body, bvar(nd));
      AssertionPtr body = left_side ? sync(applied, delayed, cond2)
                                    : sync(delayed, applied, cond2);
      out.push_back(CommSpec{false, c.chan, ExprBinder{fd, fval}, Binder{nd, "", body}});
    }
  };
  for (const auto& c : vl.cm)
    if (!chs_.count(c.chan)) build(c, true);
  for (const auto& c : vr.cm)
    if (!chs_.count(c.chan)) build(c, false);
  return out;
}

AssertionPtr SyncEngine::interrupt_sync(const View& vl, const View& vr,
                                        const BExprPtr& cond) {
  PathAssertion merged = path_merge(vl.path, vr.path);
  bool ok = compat_cm(vl.cm, vr.cm, chs_);

  if (!ok) {
    // a handshake is enabled: no time passes
    std::vector<AssertionPtr> body_parts{comm_pairs(vl, vr, cond)};
    if (vl.e && vl.tail) {
      BExprPtr g = lift(cmp(CmpOp::Le, vl.e, num(0)), allpref_);
      if (!prune(cond, g, "left tail escape " + expr_str(vl.e))) {
        AssertionPtr esc = sync(binder_apply(*vl.tail, num(0)), vr.original,
                                simplify(band(cond, g)));
        body_parts.push_back(a_bool(g, esc));
      } else {
        body_parts.push_back(a_false());
      }
    }
    if (vr.e && vr.tail) {
      BExprPtr g = lift(cmp(CmpOp::Le, vr.e, num(0)), allpref_);
      if (!prune(cond, g, "right tail escape " + expr_str(vr.e))) {
        AssertionPtr esc = sync(vl.original, binder_apply(*vr.tail, num(0)),
                                simplify(band(cond, g)));
        body_parts.push_back(a_bool(g, esc));
      } else {
        body_parts.push_back(a_false());
      }
    }
    std::string nd = fresh_.fresh_bound("d");
    std::vector<CommSpec> rels = rel_lists(vl, vr, cond, num(0));
    return normalize(a_interrupt(merged, num(0), Binder{nd, "", a_disjn(body_parts)},
                                 std::move(rels)));
  }

  // compatible: time may pass until the smaller maximum waiting time
  if (!vl.e && !vr.e) {
    std::vector<CommSpec> rels = rel_lists(vl, vr, cond, nullptr);
    return normalize(a_interrupt_inf(merged, std::move(rels)));
  }

  std::vector<AssertionPtr> branches;

  auto shorter_side = [&](bool left_shorter, const BExprPtr& guard) -> AssertionPtr {
    BExprPtr g = simplify(guard);
    if (is_false(g)) return a_false();
    std::string origin = "waiting-time comparison " + bexpr_str(g);
    if (!is_true(g) && prune(cond, g, origin)) return a_false();
    BExprPtr cond2 = simplify(band(cond, g));
    const View& s = left_shorter ? vl : vr;
    const View& o = left_shorter ? vr : vl;
    std::string nd = fresh_.fresh_bound("d");
    BExprPtr range = tail_range(bvar(nd), s.e);
    BExprPtr cond3 = simplify(band(cond2, range));
    AssertionPtr delayed = delay_assertion(bvar(nd), o.original, fresh_);
    AssertionPtr tail_body =
        left_shorter
            ? sync(binder_apply(*s.tail, bvar(nd)), delayed, cond3)
            : sync(delayed, binder_apply(*s.tail, bvar(nd)), cond3);
    std::vector<CommSpec> rels = rel_lists(vl, vr, cond2, s.e);
    AssertionPtr node = normalize(
        a_interrupt(merged, s.e, Binder{nd, "", tail_body}, std::move(rels)));
    return a_bool(g, node);
  };

  branches.push_back(shorter_side(true, lt_guard(vl.e, vr.e)));
  branches.push_back(shorter_side(false, lt_guard(vr.e, vl.e)));

  {
    BExprPtr g = simplify(eq_guard(vl.e, vr.e));
    if (!is_false(g)) {
      std::string origin = "waiting-time comparison " + bexpr_str(g);
      bool dead = !is_true(g) && prune(cond, g, origin);
      if (!dead) {
        BExprPtr cond2 = simplify(band(cond, g));
        std::string nd = fresh_.fresh_bound("d");
        BExprPtr range = tail_range(bvar(nd), vl.e);
        BExprPtr cond3 = simplify(band(cond2, range));
        AssertionPtr dl = delay_assertion(bvar(nd), vl.original, fresh_);
        AssertionPtr dr = delay_assertion(bvar(nd), vr.original, fresh_);
        AssertionPtr tail_body =
            a_disj(sync(binder_apply(*vl.tail, bvar(nd)), dr, cond3),
                   sync(dl, binder_apply(*vr.tail, bvar(nd)), cond3));
        std::vector<CommSpec> rels = rel_lists(vl, vr, cond2, vl.e);
        AssertionPtr node = normalize(
            a_interrupt(merged, vl.e, Binder{nd, "", tail_body}, std::move(rels)));
        branches.push_back(a_bool(g, node));
      }
    }
  }

  return a_disjn(std::move(branches));
}

AssertionPtr SyncEngine::init_sync(const View& v, bool init_on_left,
                                   const BExprPtr& cond) {
  AssertionPtr body = a_false();
  if (v.e && v.tail) {
    BExprPtr g = lift(cmp(CmpOp::Le, v.e, num(0)), allpref_);
    if (!prune(cond, g, "terminated-side escape " + expr_str(v.e))) {
      BExprPtr cond2 = simplify(band(cond, g));
      AssertionPtr esc = init_on_left
                             ? sync(a_init(), binder_apply(*v.tail, num(0)), cond2)
                             : sync(binder_apply(*v.tail, num(0)), a_init(), cond2);
      body = a_bool(g, esc);
    }
  }
  std::vector<CommSpec> rels;
  for (const auto& c : v.cm) {
    if (chs_.count(c.chan)) continue;
    std::string nd = fresh_.fresh_bound("d");
    BExprPtr cond2 = simplify(band(cond, cmp(CmpOp::Eq, bvar(nd), num(0))));
    if (c.is_input) {
      std::string nv = fresh_.fresh_bound("v");
      AssertionPtr applied = binder_apply(c.body, bvar(nd), bvar(nv));
      AssertionPtr b = init_on_left ? sync(a_init(), applied, cond2)
                                    : sync(applied, a_init(), cond2);
      rels.push_back(CommSpec{true, c.chan, {}, Binder{nd, nv, b}});
    } else {
      std::string fd = fresh_.fresh_bound("d");
      ExprPtr fval = lift(simplify(expr_binder_apply(c.value, bvar(fd))), allpref_);
      AssertionPtr applied = binder_apply(c.body, bvar(nd));
      AssertionPtr b = init_on_left ? sync(a_init(), applied, cond2)
                                    : sync(applied, a_init(), cond2);
      rels.push_back(CommSpec{false, c.chan, ExprBinder{fd, fval}, Binder{nd, "", b}});
    }
  }
  PathAssertion merged = v.path; // the terminated side contributes id_inv
  std::string nd = fresh_.fresh_bound("d");
  return normalize(
      a_interrupt(merged, num(0), Binder{nd, "", body}, std::move(rels)));
}

} // namespace hcspver
