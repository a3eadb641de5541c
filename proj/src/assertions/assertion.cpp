#include "assertions/assertion.hpp"

#include <sstream>

namespace hcspver {

// --- path assertions --------------------------------------------------------

PathAssertion path_id() { return {}; }

PathAssertion path_of_solution(const std::map<std::string, ExprPtr>& sol) {
  PathAssertion p;
  for (const auto& [v, e] : sol) {
    ExprPtr s = simplify(e);
    if (expr_equal(s, var(v))) continue; // identity component
    p.sol.emplace(v, std::move(s));
  }
  return p;
}

PathAssertion path_delay(const PathAssertion& p, const ExprPtr& d) {
  if (d->kind == ExprKind::Const && d->value == 0) return p;
  PathAssertion out;
  std::map<std::string, ExprPtr> shift{{kPathTime, add(bvar(kPathTime), d)}};
  for (const auto& [v, e] : p.sol) out.sol.emplace(v, simplify(subst_bound(e, shift)));
  return out;
}

PathAssertion path_merge(const PathAssertion& a, const PathAssertion& b) {
  PathAssertion out = a;
  for (const auto& [v, e] : b.sol) {
    if (out.sol.count(v))
      throw VerifyError("path merge on overlapping variable: " + v);
    out.sol.emplace(v, e);
  }
  return out;
}

PathAssertion path_subst(const PathAssertion& p,
                         const std::map<std::string, ExprPtr>& subs) {
  PathAssertion out;
  for (const auto& [v, e] : p.sol) out.sol.emplace(v, simplify(subst_vars(e, subs)));
  return out;
}

std::string path_str(const PathAssertion& p) {
  if (p.is_id()) return "id_inv";
  std::ostringstream os;
  os << "s = s0[";
  bool first = true;
  for (const auto& [v, e] : p.sol) {
    if (!first) os << ", ";
    first = false;
    os << v << " := " << expr_str(e);
  }
  os << "]";
  return os.str();
}

bool path_equal(const PathAssertion& a, const PathAssertion& b) {
  if (a.sol.size() != b.sol.size()) return false;
  for (const auto& [v, e] : a.sol) {
    auto it = b.sol.find(v);
    if (it == b.sol.end() || !expr_equal(e, it->second)) return false;
  }
  return true;
}

// --- constructors -----------------------------------------------------------

static AssertionPtr mka(Assertion a) { return std::make_shared<Assertion>(std::move(a)); }

AssertionPtr a_true() {
  static AssertionPtr x = mka(Assertion{AKind::True});
  return x;
}

AssertionPtr a_false() {
  static AssertionPtr x = mka(Assertion{AKind::False});
  return x;
}

AssertionPtr a_init() {
  static AssertionPtr x = mka(Assertion{AKind::Init});
  return x;
}

AssertionPtr a_conj(AssertionPtr p, AssertionPtr q) {
  if (p->kind == AKind::False || q->kind == AKind::False) return a_false();
  if (p->kind == AKind::True) return q;
  if (q->kind == AKind::True) return p;
  Assertion a{AKind::Conj};
  a.a = std::move(p);
  a.b = std::move(q);
  return mka(std::move(a));
}

AssertionPtr a_disj(AssertionPtr p, AssertionPtr q) {
  if (p->kind == AKind::False) return q;
  if (q->kind == AKind::False) return p;
  Assertion a{AKind::Disj};
  a.a = std::move(p);
  a.b = std::move(q);
  return mka(std::move(a));
}

AssertionPtr a_disjn(std::vector<AssertionPtr> ps) {
  AssertionPtr acc = a_false();
  for (auto& p : ps) acc = a_disj(std::move(acc), std::move(p));
  return acc;
}

AssertionPtr a_bool(BExprPtr b, AssertionPtr p) {
  if (is_true(b)) return p;
  if (is_false(b) || p->kind == AKind::False) return a_false();
  Assertion a{AKind::Bool};
  a.guard = std::move(b);
  a.a = std::move(p);
  return mka(std::move(a));
}

AssertionPtr a_subst(AssertionPtr p, std::vector<std::pair<std::string, ExprPtr>> subs) {
  if (subs.empty()) return p;
  if (p->kind == AKind::True || p->kind == AKind::False) return p;
  Assertion a{AKind::Subst};
  a.a = std::move(p);
  a.subs = std::move(subs);
  return mka(std::move(a));
}

AssertionPtr a_wait_in(PathAssertion i, const std::string& ch, Binder body) {
  Assertion a{AKind::WaitIn};
  a.path = std::move(i);
  a.chan = ch;
  a.body = std::move(body);
  return mka(std::move(a));
}

AssertionPtr a_wait_outv(PathAssertion i, const std::string& ch, ExprPtr e, Binder body) {
  Assertion a{AKind::WaitOutv};
  a.path = std::move(i);
  a.chan = ch;
  a.expr = std::move(e);
  a.body = std::move(body);
  return mka(std::move(a));
}

AssertionPtr a_wait(PathAssertion i, ExprPtr e, Binder body) {
  Assertion a{AKind::Wait};
  a.path = std::move(i);
  a.expr = std::move(e);
  a.body = std::move(body);
  return mka(std::move(a));
}

AssertionPtr a_interrupt(PathAssertion i, ExprPtr e, Binder tail,
                         std::vector<CommSpec> cm) {
  Assertion a{AKind::Interrupt};
  a.path = std::move(i);
  a.expr = std::move(e);
  a.body = std::move(tail);
  a.cm = std::move(cm);
  return mka(std::move(a));
}

AssertionPtr a_interrupt_inf(PathAssertion i, std::vector<CommSpec> cm) {
  Assertion a{AKind::InterruptInf};
  a.path = std::move(i);
  a.cm = std::move(cm);
  return mka(std::move(a));
}

AssertionPtr a_rec(AssertionPtr base, AssertionPtr functional) {
  Assertion a{AKind::Rec};
  a.a = std::move(base);
  a.b = std::move(functional);
  return mka(std::move(a));
}

AssertionPtr a_sync(std::set<std::string> chs, AssertionPtr l, AssertionPtr r) {
  Assertion a{AKind::Sync};
  a.chs = std::move(chs);
  a.a = std::move(l);
  a.b = std::move(r);
  return mka(std::move(a));
}

AssertionPtr a_hole(int tag) {
  Assertion a{AKind::Hole};
  a.hole = tag;
  return mka(std::move(a));
}

std::set<std::pair<std::string, bool>> rdy(const std::vector<CommSpec>& cm) {
  std::set<std::pair<std::string, bool>> out;
  for (const auto& c : cm) out.emplace(c.chan, c.is_input);
  return out;
}

// --- traversal helpers ------------------------------------------------------

AssertionPtr fill_hole(const AssertionPtr& a, const AssertionPtr& value, int tag) {
  switch (a->kind) {
    case AKind::Hole: return a->hole == tag ? value : a;
    case AKind::True:
    case AKind::False:
    case AKind::Init: return a;
    default: {
      Assertion out = *a;
      if (out.a) out.a = fill_hole(out.a, value, tag);
      // a recursion functional binds its own holes
      if (out.b && a->kind != AKind::Rec) out.b = fill_hole(out.b, value, tag);
      if (out.body.body) out.body.body = fill_hole(out.body.body, value, tag);
      for (auto& c : out.cm) c.body.body = fill_hole(c.body.body, value, tag);
      return mka(std::move(out));
    }
  }
}

bool contains_kind(const AssertionPtr& a, AKind k) {
  if (a->kind == k) return true;
  if (a->a && contains_kind(a->a, k)) return true;
  if (a->b && contains_kind(a->b, k)) return true;
  if (a->body.body && contains_kind(a->body.body, k)) return true;
  for (const auto& c : a->cm)
    if (contains_kind(c.body.body, k)) return true;
  return false;
}

// --- binder instantiation ---------------------------------------------------

namespace {

AssertionPtr subst_bound_assertion(const AssertionPtr& a,
                                   const std::map<std::string, ExprPtr>& sub) {
  if (sub.empty()) return a;
  switch (a->kind) {
    case AKind::True:
    case AKind::False:
    case AKind::Init:
    case AKind::Hole: return a;
    default: break;
  }
  Assertion out = *a;
  if (out.a) out.a = subst_bound_assertion(out.a, sub);
  if (out.b) out.b = subst_bound_assertion(out.b, sub);
  if (out.guard) out.guard = subst_bound(out.guard, sub);
  for (auto& [v, e] : out.subs) e = subst_bound(e, sub);
  for (auto& [v, e] : out.path.sol) e = subst_bound(e, sub);
  if (out.expr) out.expr = subst_bound(out.expr, sub);
  if (out.body.body) out.body.body = subst_bound_assertion(out.body.body, sub);
  for (auto& c : out.cm) {
    if (c.value.body) c.value.body = subst_bound(c.value.body, sub);
    c.body.body = subst_bound_assertion(c.body.body, sub);
  }
  return mka(std::move(out));
}

} // namespace

AssertionPtr binder_apply(const Binder& b, const ExprPtr& d, const ExprPtr& v) {
  std::map<std::string, ExprPtr> sub;
  sub.emplace(b.dvar, d);
  if (!b.vvar.empty()) {
    if (!v) throw VerifyError("binder expects a value argument");
    sub.emplace(b.vvar, v);
  }
  return subst_bound_assertion(b.body, sub);
}

ExprPtr expr_binder_apply(const ExprBinder& f, const ExprPtr& d) {
  std::map<std::string, ExprPtr> sub{{f.dvar, d}};
  return subst_bound(f.body, sub);
}

// --- printing ---------------------------------------------------------------

namespace {

struct PrintCtx {
  std::map<std::string, std::string> names; // internal bound name -> display
  int depth_d = 0, depth_v = 0, depth_r = 0;
};

std::string display(PrintCtx& ctx, const std::string& internal, char base) {
  auto it = ctx.names.find(internal);
  if (it != ctx.names.end()) return it->second;
  int n = base == 'd' ? ++ctx.depth_d : ++ctx.depth_v;
  std::string disp = std::string(1, base) + (n == 1 ? "" : std::to_string(n));
  ctx.names.emplace(internal, disp);
  return disp;
}

ExprPtr rename_bound_for_display(const ExprPtr& e, const PrintCtx& ctx) {
  std::map<std::string, ExprPtr> sub;
  for (const auto& [k, v] : ctx.names) sub.emplace(k, bvar(v));
  return subst_bound(e, sub);
}

BExprPtr rename_bound_for_display(const BExprPtr& e, const PrintCtx& ctx) {
  std::map<std::string, ExprPtr> sub;
  for (const auto& [k, v] : ctx.names) sub.emplace(k, bvar(v));
  return subst_bound(e, sub);
}

// Precedence: Disj 1, Conj 2, postfix/atom 3.
void print_assertion(std::ostream& os, const AssertionPtr& a, PrintCtx ctx, int prec);

void print_path(std::ostream& os, const PathAssertion& p, const PrintCtx& ctx) {
  if (p.is_id()) {
    os << "id_inv";
    return;
  }
  os << "s = s0[";
  bool first = true;
  for (const auto& [v, e] : p.sol) {
    if (!first) os << ", ";
    first = false;
    os << v << " := " << expr_str(rename_bound_for_display(e, ctx));
  }
  os << "]";
}

void print_binder(std::ostream& os, const Binder& b, PrintCtx ctx) {
  std::string d = display(ctx, b.dvar, 'd');
  if (b.vvar.empty()) {
    os << "{" << d << " => ";
  } else {
    std::string v = display(ctx, b.vvar, 'v');
    os << "{(" << d << ", " << v << ") => ";
  }
  print_assertion(os, b.body, ctx, 0);
  os << "}";
}

void print_expr_binder(std::ostream& os, const ExprBinder& f, PrintCtx ctx) {
  std::string d = display(ctx, f.dvar, 'd');
  os << "{" << d << " => " << expr_str(rename_bound_for_display(f.body, ctx)) << "}";
}

void print_cm(std::ostream& os, const std::vector<CommSpec>& cm, const PrintCtx& ctx) {
  os << "[";
  for (size_t i = 0; i < cm.size(); ++i) {
    if (i) os << ", ";
    const auto& c = cm[i];
    if (c.is_input) {
      os << "<" << c.chan << "?, ";
      print_binder(os, c.body, ctx);
    } else {
      os << "<" << c.chan << "!, ";
      print_expr_binder(os, c.value, ctx);
      os << ", ";
      print_binder(os, c.body, ctx);
    }
    os << ">";
  }
  os << "]";
}

void print_assertion(std::ostream& os, const AssertionPtr& a, PrintCtx ctx, int prec) {
  switch (a->kind) {
    case AKind::True: os << "true"; return;
    case AKind::False: os << "false"; return;
    case AKind::Init: os << "init"; return;
    case AKind::Hole: os << "R" << (a->hole ? std::to_string(a->hole) : ""); return;
    case AKind::Disj: {
      if (prec > 1) os << "(";
      print_assertion(os, a->a, ctx, 1);
      os << " || ";
      print_assertion(os, a->b, ctx, a->b->kind == AKind::Disj ? 1 : 2);
      if (prec > 1) os << ")";
      return;
    }
    case AKind::Conj: {
      if (prec > 2) os << "(";
      print_assertion(os, a->a, ctx, 2);
      os << " && ";
      print_assertion(os, a->b, ctx, a->b->kind == AKind::Conj ? 2 : 3);
      if (prec > 2) os << ")";
      return;
    }
    case AKind::Bool: {
      if (prec > 2) os << "(";
      os << "^(" << bexpr_str(rename_bound_for_display(a->guard, ctx)) << ") && ";
      print_assertion(os, a->a, ctx, 3);
      if (prec > 2) os << ")";
      return;
    }
    case AKind::Subst: {
      bool atom = a->a->kind == AKind::Init || a->a->kind == AKind::Hole ||
                  a->a->kind == AKind::Subst;
      if (!atom) os << "(";
      print_assertion(os, a->a, ctx, 3);
      if (!atom) os << ")";
      os << "[";
      for (size_t i = 0; i < a->subs.size(); ++i) {
        if (i) os << ", ";
        os << a->subs[i].first << " := "
           << expr_str(rename_bound_for_display(a->subs[i].second, ctx));
      }
      os << "]";
      return;
    }
    case AKind::WaitIn:
      os << "wait_in(";
      print_path(os, a->path, ctx);
      os << ", " << a->chan << ", ";
      print_binder(os, a->body, ctx);
      os << ")";
      return;
    case AKind::WaitOutv:
      os << "wait_outv(";
      print_path(os, a->path, ctx);
      os << ", " << a->chan << ", "
         << expr_str(rename_bound_for_display(a->expr, ctx)) << ", ";
      print_binder(os, a->body, ctx);
      os << ")";
      return;
    case AKind::Wait:
      os << "wait(";
      print_path(os, a->path, ctx);
      os << ", " << expr_str(rename_bound_for_display(a->expr, ctx)) << ", ";
      print_binder(os, a->body, ctx);
      os << ")";
      return;
    case AKind::Interrupt:
      os << "interrupt(";
      print_path(os, a->path, ctx);
      os << ", " << expr_str(rename_bound_for_display(a->expr, ctx)) << ", ";
      print_binder(os, a->body, ctx);
      os << ", ";
      print_cm(os, a->cm, ctx);
      os << ")";
      return;
    case AKind::InterruptInf:
      os << "interrupt_inf(";
      print_path(os, a->path, ctx);
      os << ", ";
      print_cm(os, a->cm, ctx);
      os << ")";
      return;
    case AKind::Rec: {
      os << "rec R. ";
      print_assertion(os, a->a, ctx, 2);
      os << " || ";
      print_assertion(os, a->b, ctx, 2);
      return;
    }
    case AKind::Sync: {
      os << "sync({";
      bool first = true;
      for (const auto& ch : a->chs) {
        if (!first) os << ", ";
        first = false;
        os << ch;
      }
      os << "}, ";
      print_assertion(os, a->a, ctx, 0);
      os << ", ";
      print_assertion(os, a->b, ctx, 0);
      os << ")";
      return;
    }
  }
}

} // namespace

std::string assertion_str(const AssertionPtr& a) {
  std::ostringstream os;
  print_assertion(os, a, PrintCtx{}, 0);
  return os.str();
}

bool assertion_equal(const AssertionPtr& a, const AssertionPtr& b) {
  return assertion_str(a) == assertion_str(b);
}

} // namespace hcspver
