#include "lang/ast.hpp"

#include <functional>
#include <sstream>

namespace hcspver {

static ProcessPtr mkp(Process p) { return std::make_shared<Process>(std::move(p)); }

static void require_sequential(const ProcessPtr& p, const char* where) {
  if (p && p->kind == ProcKind::Parallel)
    throw VerifyError(std::string("parallel composition not allowed under ") + where);
}

ProcessPtr p_skip() {
  static ProcessPtr s = mkp(Process{ProcKind::Skip});
  return s;
}

ProcessPtr p_assign(const std::string& x, ExprPtr e) {
  Process p{ProcKind::Assign};
  p.var = x;
  p.expr = std::move(e);
  return mkp(std::move(p));
}

ProcessPtr p_input(const std::string& ch, const std::string& x) {
  Process p{ProcKind::Input};
  p.chan = ch;
  p.var = x;
  return mkp(std::move(p));
}

ProcessPtr p_output(const std::string& ch, ExprPtr e) {
  Process p{ProcKind::Output};
  p.chan = ch;
  p.expr = std::move(e);
  return mkp(std::move(p));
}

ProcessPtr p_ichoice(ProcessPtr a, ProcessPtr b) {
  require_sequential(a, "internal choice");
  require_sequential(b, "internal choice");
  Process p{ProcKind::IChoice};
  p.a = std::move(a);
  p.b = std::move(b);
  return mkp(std::move(p));
}

ProcessPtr p_seq(ProcessPtr a, ProcessPtr b) {
  require_sequential(a, "sequential composition");
  require_sequential(b, "sequential composition");
  Process p{ProcKind::Seq};
  p.a = std::move(a);
  p.b = std::move(b);
  return mkp(std::move(p));
}

ProcessPtr p_repeat(ProcessPtr body) {
  require_sequential(body, "repetition");
  Process p{ProcKind::Repeat};
  p.a = std::move(body);
  return mkp(std::move(p));
}

ProcessPtr p_cond(BExprPtr test, ProcessPtr a, ProcessPtr b) {
  require_sequential(a, "conditional");
  require_sequential(b, "conditional");
  Process p{ProcKind::Cond};
  p.guard = std::move(test);
  p.a = std::move(a);
  p.b = std::move(b);
  return mkp(std::move(p));
}

static void check_ode_vars(const std::vector<OdeEq>& eqs) {
  std::set<std::string> seen;
  for (const auto& eq : eqs)
    if (!seen.insert(eq.var).second)
      throw VerifyError("duplicate ODE variable: " + eq.var);
}

ProcessPtr p_ode(std::vector<OdeEq> eqs, BExprPtr domain) {
  check_ode_vars(eqs);
  Process p{ProcKind::Ode};
  p.eqs = std::move(eqs);
  p.guard = std::move(domain);
  return mkp(std::move(p));
}

ProcessPtr p_wait(ExprPtr e) {
  Process p{ProcKind::Wait};
  p.expr = std::move(e);
  return mkp(std::move(p));
}

ProcessPtr p_interrupt(std::vector<OdeEq> eqs, BExprPtr domain, ProcessPtr tail,
                       std::vector<CommBranch> comms) {
  check_ode_vars(eqs);
  if (comms.empty()) throw VerifyError("interrupt requires at least one communication");
  require_sequential(tail, "interrupt");
  for (const auto& c : comms) require_sequential(c.cont, "interrupt branch");
  Process p{ProcKind::Interrupt};
  p.eqs = std::move(eqs);
  p.guard = std::move(domain);
  p.a = std::move(tail);
  p.comms = std::move(comms);
  return mkp(std::move(p));
}

ProcessPtr p_parallel(ProcessPtr a, std::set<std::string> chans, ProcessPtr b) {
  Process p{ProcKind::Parallel};
  p.a = std::move(a);
  p.b = std::move(b);
  p.chanset = std::move(chans);
  return mkp(std::move(p));
}

bool is_sequential(const ProcessPtr& p) { return p->kind != ProcKind::Parallel; }

bool process_equal(const ProcessPtr& a, const ProcessPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  if (a->var != b->var || a->chan != b->chan) return false;
  auto eq_expr = [](const ExprPtr& x, const ExprPtr& y) {
    return (!x && !y) || (x && y && expr_equal(x, y));
  };
  auto eq_bexpr = [](const BExprPtr& x, const BExprPtr& y) {
    return (!x && !y) || (x && y && bexpr_equal(x, y));
  };
  auto eq_proc = [](const ProcessPtr& x, const ProcessPtr& y) {
    return (!x && !y) || (x && y && process_equal(x, y));
  };
  if (!eq_expr(a->expr, b->expr) || !eq_bexpr(a->guard, b->guard)) return false;
  if (!eq_proc(a->a, b->a) || !eq_proc(a->b, b->b)) return false;
  if (a->eqs.size() != b->eqs.size()) return false;
  for (size_t i = 0; i < a->eqs.size(); ++i)
    if (a->eqs[i].var != b->eqs[i].var || !expr_equal(a->eqs[i].rhs, b->eqs[i].rhs))
      return false;
  if (a->comms.size() != b->comms.size()) return false;
  for (size_t i = 0; i < a->comms.size(); ++i) {
    const auto& x = a->comms[i];
    const auto& y = b->comms[i];
    if (x.is_input != y.is_input || x.chan != y.chan || x.var != y.var) return false;
    if (!eq_expr(x.expr, y.expr) || !eq_proc(x.cont, y.cont)) return false;
  }
  return a->chanset == b->chanset;
}

// --- pretty printer ---------------------------------------------------------
//
// ';' binds tighter than '$'; '*' applies to parenthesized groups only;
// '||' is right-associative. Output reparses to an equal AST.

namespace {

enum Level { LvlPar = 0, LvlChoice = 1, LvlSeq = 2, LvlPrim = 3 };

void print_proc(std::ostream& os, const ProcessPtr& p, int lvl);

bool self_delimited(const Process& p) {
  switch (p.kind) {
    case ProcKind::Seq:
    case ProcKind::IChoice:
    case ProcKind::Parallel: return false;
    default: return true;
  }
}

void print_ode_head(std::ostream& os, const Process& p) {
  os << "<";
  for (size_t i = 0; i < p.eqs.size(); ++i) {
    if (i) os << ", ";
    os << p.eqs[i].var << "_dot = " << expr_str(p.eqs[i].rhs);
  }
  os << " & " << bexpr_str(p.guard);
}

void print_proc(std::ostream& os, const ProcessPtr& p, int lvl) {
  switch (p->kind) {
    case ProcKind::Skip: os << "skip"; return;
    case ProcKind::Assign:
      os << p->var << " := " << expr_str(p->expr);
      return;
    case ProcKind::Input: os << p->chan << "?" << p->var; return;
    case ProcKind::Output: os << p->chan << "!" << expr_str(p->expr); return;
    case ProcKind::Wait: os << "wait " << expr_str(p->expr); return;
    case ProcKind::Seq: {
      if (lvl > LvlSeq) {
        os << "(";
        print_proc(os, p, LvlChoice);
        os << ")";
        return;
      }
      print_proc(os, p->a, p->a->kind == ProcKind::Seq ? LvlSeq : LvlPrim);
      os << "; ";
      print_proc(os, p->b, LvlPrim);
      return;
    }
    case ProcKind::IChoice: {
      if (lvl > LvlChoice) {
        os << "(";
        print_proc(os, p, LvlChoice);
        os << ")";
        return;
      }
      print_proc(os, p->a, p->a->kind == ProcKind::IChoice ? LvlChoice : LvlSeq);
      os << " $ ";
      print_proc(os, p->b, LvlSeq);
      return;
    }
    case ProcKind::Repeat:
      os << "(";
      print_proc(os, p->a, LvlChoice);
      os << ")*";
      return;
    case ProcKind::Cond:
      os << "if " << bexpr_str(p->guard) << " then ";
      print_proc(os, p->a, LvlChoice);
      os << " else ";
      print_proc(os, p->b, LvlChoice);
      os << " endif";
      return;
    case ProcKind::Ode:
      print_ode_head(os, *p);
      os << ">";
      return;
    case ProcKind::Interrupt: {
      print_ode_head(os, *p);
      os << " |> ";
      print_proc(os, p->a, LvlChoice);
      os << "> |> [] (";
      for (size_t i = 0; i < p->comms.size(); ++i) {
        if (i) os << ", ";
        const auto& c = p->comms[i];
        if (c.is_input)
          os << c.chan << "?" << c.var;
        else
          os << c.chan << "!" << expr_str(c.expr);
        os << " -> ";
        print_proc(os, c.cont, LvlChoice);
      }
      os << ")";
      return;
    }
    case ProcKind::Parallel: {
      if (lvl > LvlPar) {
        // no parenthesized parallel in the text grammar; print anyway
        os << "(";
        print_proc(os, p, LvlPar);
        os << ")";
        return;
      }
      print_proc(os, p->a, LvlChoice);
      os << " ||[";
      bool first = true;
      for (const auto& ch : p->chanset) {
        if (!first) os << ", ";
        first = false;
        os << ch;
      }
      os << "] ";
      print_proc(os, p->b, p->b->kind == ProcKind::Parallel ? LvlPar : LvlChoice);
      return;
    }
  }
  (void)self_delimited;
}

} // namespace

std::string pretty(const ProcessPtr& p) {
  std::ostringstream os;
  print_proc(os, p, 0);
  return os.str();
}

// --- variable/channel traversals --------------------------------------------

static void fv(const ProcessPtr& p, std::set<std::string>& out) {
  if (!p) return;
  if (p->expr) collect_expr_vars(p->expr, &out, nullptr);
  if (p->guard) collect_bexpr_vars(p->guard, &out, nullptr);
  if (!p->var.empty()) out.insert(p->var);
  for (const auto& eq : p->eqs) {
    out.insert(eq.var);
    collect_expr_vars(eq.rhs, &out, nullptr);
  }
  for (const auto& c : p->comms) {
    if (c.is_input) out.insert(c.var);
    if (c.expr) collect_expr_vars(c.expr, &out, nullptr);
    fv(c.cont, out);
  }
  fv(p->a, out);
  fv(p->b, out);
}

std::set<std::string> free_vars(const ProcessPtr& p) {
  std::set<std::string> out;
  fv(p, out);
  return out;
}

static void chans(const ProcessPtr& p, std::set<std::string>& out) {
  if (!p) return;
  if (!p->chan.empty()) out.insert(p->chan);
  for (const auto& c : p->comms) {
    out.insert(c.chan);
    chans(c.cont, out);
  }
  chans(p->a, out);
  chans(p->b, out);
}

std::set<std::string> channels(const ProcessPtr& p) {
  std::set<std::string> out;
  chans(p, out);
  return out;
}

ProcessPtr rename_vars(const ProcessPtr& p,
                       const std::function<std::string(const std::string&)>& f) {
  if (!p) return p;
  auto ren_expr = [&](const ExprPtr& e) -> ExprPtr {
    if (!e) return e;
    std::set<std::string> names;
    collect_expr_vars(e, &names, nullptr);
    std::map<std::string, ExprPtr> sub;
    for (const auto& n : names) sub.emplace(n, var(f(n)));
    return subst_vars(e, sub);
  };
  auto ren_bexpr = [&](const BExprPtr& b) -> BExprPtr {
    if (!b) return b;
    std::set<std::string> names;
    collect_bexpr_vars(b, &names, nullptr);
    std::map<std::string, ExprPtr> sub;
    for (const auto& n : names) sub.emplace(n, var(f(n)));
    return subst_vars(b, sub);
  };
  Process out = *p;
  if (!out.var.empty()) out.var = f(out.var);
  out.expr = ren_expr(out.expr);
  out.guard = ren_bexpr(out.guard);
  for (auto& eq : out.eqs) {
    eq.var = f(eq.var);
    eq.rhs = ren_expr(eq.rhs);
  }
  for (auto& c : out.comms) {
    if (c.is_input) c.var = f(c.var);
    c.expr = ren_expr(c.expr);
    c.cont = rename_vars(c.cont, f);
  }
  out.a = rename_vars(out.a, f);
  out.b = rename_vars(out.b, f);
  return std::make_shared<Process>(std::move(out));
}

} // namespace hcspver
