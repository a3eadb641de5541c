#include "core/expr.hpp"

#include <algorithm>
#include <sstream>

namespace hcspver {

Rational rat_parse(const std::string& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rational num(s.substr(0, slash));
    Rational den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational with zero denominator: " + s);
    Rational r = num / den;
    r.canonicalize();
    return r;
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::string den = "1" + std::string(s.size() - dot - 1, '0');
    Rational r = Rational(digits) / Rational(den);
    r.canonicalize();
    return r;
  }
  Rational r(s);
  r.canonicalize();
  return r;
}

Rational rat_pow(const Rational& base, long exp) {
  if (exp == 0) return Rational(1);
  if (base == 0 && exp < 0) throw VerifyError("zero raised to a negative power");
  Rational acc(1);
  Rational b = base;
  long k = exp < 0 ? -exp : exp;
  for (long i = 0; i < k; ++i) acc *= b;
  if (exp < 0) acc = Rational(1) / acc;
  acc.canonicalize();
  return acc;
}

// --- constructors -----------------------------------------------------------

static ExprPtr mk(Expr e) { return std::make_shared<Expr>(std::move(e)); }

ExprPtr num(long n) { return num(Rational(n)); }

ExprPtr num(const Rational& r) {
  Expr e;
  e.kind = ExprKind::Const;
  e.value = r;
  e.value.canonicalize();
  return mk(std::move(e));
}

ExprPtr var(const std::string& name) {
  Expr e;
  e.kind = ExprKind::Var;
  e.name = name;
  return mk(std::move(e));
}

ExprPtr bvar(const std::string& name) {
  Expr e;
  e.kind = ExprKind::Bound;
  e.name = name;
  return mk(std::move(e));
}

ExprPtr neg(ExprPtr a) {
  if (a->kind == ExprKind::Const) return num(-a->value);
  Expr e;
  e.kind = ExprKind::Neg;
  e.args = {std::move(a)};
  return mk(std::move(e));
}

ExprPtr addn(std::vector<ExprPtr> args) {
  std::vector<ExprPtr> flat;
  for (auto& a : args) {
    if (a->kind == ExprKind::Add)
      flat.insert(flat.end(), a->args.begin(), a->args.end());
    else
      flat.push_back(std::move(a));
  }
  if (flat.empty()) return num(0);
  if (flat.size() == 1) return flat[0];
  Expr e;
  e.kind = ExprKind::Add;
  e.args = std::move(flat);
  return mk(std::move(e));
}

ExprPtr add(ExprPtr a, ExprPtr b) { return addn({std::move(a), std::move(b)}); }

ExprPtr sub(ExprPtr a, ExprPtr b) { return add(std::move(a), neg(std::move(b))); }

ExprPtr muln(std::vector<ExprPtr> args) {
  std::vector<ExprPtr> flat;
  for (auto& a : args) {
    if (a->kind == ExprKind::Mul)
      flat.insert(flat.end(), a->args.begin(), a->args.end());
    else
      flat.push_back(std::move(a));
  }
  if (flat.empty()) return num(1);
  if (flat.size() == 1) return flat[0];
  Expr e;
  e.kind = ExprKind::Mul;
  e.args = std::move(flat);
  return mk(std::move(e));
}

ExprPtr mul(ExprPtr a, ExprPtr b) { return muln({std::move(a), std::move(b)}); }

ExprPtr divide(ExprPtr a, ExprPtr b) {
  if (b->kind == ExprKind::Const) {
    if (b->value == 0) throw VerifyError("division by syntactic zero");
    if (a->kind == ExprKind::Const) return num(Rational(a->value / b->value));
  }
  Expr e;
  e.kind = ExprKind::Div;
  e.args = {std::move(a), std::move(b)};
  return mk(std::move(e));
}

ExprPtr powi(ExprPtr base, long exponent) {
  Expr e;
  e.kind = ExprKind::Pow;
  e.args = {std::move(base)};
  e.exponent = exponent;
  return mk(std::move(e));
}

// --- structural equality ----------------------------------------------------

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::Const: return a->value == b->value;
    case ExprKind::Var:
    case ExprKind::Bound: return a->name == b->name;
    case ExprKind::Pow:
      if (a->exponent != b->exponent) return false;
      [[fallthrough]];
    default: {
      if (a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!expr_equal(a->args[i], b->args[i])) return false;
      return true;
    }
  }
}

void collect_expr_vars(const ExprPtr& e, std::set<std::string>* prog,
                       std::set<std::string>* bound) {
  switch (e->kind) {
    case ExprKind::Var:
      if (prog) prog->insert(e->name);
      return;
    case ExprKind::Bound:
      if (bound) bound->insert(e->name);
      return;
    default:
      for (const auto& a : e->args) collect_expr_vars(a, prog, bound);
  }
}

// --- substitution -----------------------------------------------------------

template <ExprKind Leaf>
static ExprPtr subst_impl(const ExprPtr& e, const std::map<std::string, ExprPtr>& sub) {
  if (sub.empty()) return e;
  switch (e->kind) {
    case ExprKind::Const: return e;
    case ExprKind::Var:
    case ExprKind::Bound: {
      if (e->kind == Leaf) {
        auto it = sub.find(e->name);
        if (it != sub.end()) return it->second;
      }
      return e;
    }
    default: {
      bool changed = false;
      std::vector<ExprPtr> args;
      args.reserve(e->args.size());
      for (const auto& a : e->args) {
        args.push_back(subst_impl<Leaf>(a, sub));
        changed |= args.back().get() != a.get();
      }
      if (!changed) return e;
      Expr out = *e;
      out.args = std::move(args);
      return mk(std::move(out));
    }
  }
}

ExprPtr subst_vars(const ExprPtr& e, const std::map<std::string, ExprPtr>& sub) {
  return subst_impl<ExprKind::Var>(e, sub);
}

ExprPtr subst_bound(const ExprPtr& e, const std::map<std::string, ExprPtr>& sub) {
  return subst_impl<ExprKind::Bound>(e, sub);
}

// --- simplification ---------------------------------------------------------
//
// A fixed terminating rewrite set applied bottom-up: constant folding,
// neutral-element elimination, flattening, and collection of syntactically
// equal summands. Term order is first occurrence, which keeps output stable
// across runs.

namespace {

struct Term {
  Rational coeff;
  ExprPtr core; // null for the constant slot
};

// Splits a simplified expression into coefficient and core factor list.
Term decompose(const ExprPtr& e) {
  if (e->kind == ExprKind::Const) return {e->value, nullptr};
  if (e->kind == ExprKind::Mul && e->args[0]->kind == ExprKind::Const) {
    std::vector<ExprPtr> rest(e->args.begin() + 1, e->args.end());
    return {e->args[0]->value, muln(std::move(rest))};
  }
  return {Rational(1), e};
}

ExprPtr rebuild_term(const Term& t) {
  if (!t.core) return num(t.coeff);
  if (t.coeff == 1) return t.core;
  std::vector<ExprPtr> args{num(t.coeff)};
  if (t.core->kind == ExprKind::Mul)
    args.insert(args.end(), t.core->args.begin(), t.core->args.end());
  else
    args.push_back(t.core);
  return muln(std::move(args));
}

} // namespace

ExprPtr simplify(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Const:
    case ExprKind::Var:
    case ExprKind::Bound:
      return e;
    case ExprKind::Neg:
      return simplify(mul(num(-1), e->args[0]));
    case ExprKind::Add: {
      std::vector<ExprPtr> flat;
      for (const auto& a : e->args) {
        ExprPtr s = simplify(a);
        if (s->kind == ExprKind::Add)
          flat.insert(flat.end(), s->args.begin(), s->args.end());
        else
          flat.push_back(s);
      }
      std::vector<Term> terms;
      for (const auto& f : flat) {
        Term t = decompose(f);
        bool merged = false;
        for (auto& u : terms) {
          bool both_const = !u.core && !t.core;
          if (both_const || (u.core && t.core && expr_equal(u.core, t.core))) {
            u.coeff += t.coeff;
            merged = true;
            break;
          }
        }
        if (!merged) terms.push_back(std::move(t));
      }
      // positive-coefficient terms first (stable), so differences print as
      // subtractions: 5 - x rather than -x + 5
      std::vector<ExprPtr> out;
      for (const auto& t : terms)
        if (t.coeff > 0) out.push_back(rebuild_term(t));
      for (const auto& t : terms)
        if (t.coeff < 0) out.push_back(rebuild_term(t));
      if (out.empty()) return num(0);
      return addn(std::move(out));
    }
    case ExprKind::Mul: {
      std::vector<ExprPtr> flat;
      for (const auto& a : e->args) {
        ExprPtr s = simplify(a);
        if (s->kind == ExprKind::Mul)
          flat.insert(flat.end(), s->args.begin(), s->args.end());
        else
          flat.push_back(s);
      }
      Rational coeff(1);
      std::vector<ExprPtr> factors;
      for (const auto& f : flat) {
        if (f->kind == ExprKind::Const)
          coeff *= f->value;
        else
          factors.push_back(f);
      }
      if (coeff == 0) return num(0);
      if (factors.empty()) return num(coeff);
      if (coeff == 1) return muln(std::move(factors));
      // distribute a lone constant over a sum so equal subtrees cancel
      if (factors.size() == 1 && factors[0]->kind == ExprKind::Add) {
        std::vector<ExprPtr> terms;
        for (const auto& t : factors[0]->args) terms.push_back(mul(num(coeff), t));
        return simplify(addn(std::move(terms)));
      }
      std::vector<ExprPtr> args{num(coeff)};
      args.insert(args.end(), factors.begin(), factors.end());
      return muln(std::move(args));
    }
    case ExprKind::Div: {
      ExprPtr a = simplify(e->args[0]);
      ExprPtr b = simplify(e->args[1]);
      if (b->kind == ExprKind::Const) {
        if (b->value == 0) throw VerifyError("division by zero after simplification");
        return simplify(mul(num(Rational(1 / b->value)), a));
      }
      return divide(std::move(a), std::move(b));
    }
    case ExprKind::Pow: {
      ExprPtr b = simplify(e->args[0]);
      if (e->exponent == 0) return num(1);
      if (e->exponent == 1) return b;
      if (b->kind == ExprKind::Const) return num(rat_pow(b->value, e->exponent));
      return powi(std::move(b), e->exponent);
    }
  }
  throw VerifyError("unreachable expression kind");
}

// --- states and evaluation --------------------------------------------------

const Rational& State::lookup(const std::string& x) const {
  auto it = values.find(x);
  if (it == values.end()) throw VerifyError("unbound variable: " + x);
  return it->second;
}

State merge_disjoint(const State& a, const State& b) {
  State out = a;
  for (const auto& [k, v] : b.values) {
    if (out.values.count(k))
      throw VerifyError("state merge on overlapping variable: " + k);
    out.values.emplace(k, v);
  }
  return out;
}

std::string state_str(const State& s) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [k, v] : s.values) {
    if (!first) os << ", ";
    first = false;
    os << k << ": " << rat_str(v);
  }
  os << "}";
  return os.str();
}

Rational eval_expr(const ExprPtr& e, const State& s, const BoundEnv& benv) {
  switch (e->kind) {
    case ExprKind::Const: return e->value;
    case ExprKind::Var: return s.lookup(e->name);
    case ExprKind::Bound: {
      auto it = benv.find(e->name);
      if (it == benv.end()) throw VerifyError("unbound variable: " + e->name);
      return it->second;
    }
    case ExprKind::Neg: return -eval_expr(e->args[0], s, benv);
    case ExprKind::Add: {
      Rational acc(0);
      for (const auto& a : e->args) acc += eval_expr(a, s, benv);
      return acc;
    }
    case ExprKind::Mul: {
      Rational acc(1);
      for (const auto& a : e->args) acc *= eval_expr(a, s, benv);
      return acc;
    }
    case ExprKind::Div: {
      Rational d = eval_expr(e->args[1], s, benv);
      if (d == 0) throw VerifyError("division by zero in " + expr_str(e));
      return Rational(eval_expr(e->args[0], s, benv) / d);
    }
    case ExprKind::Pow:
      return rat_pow(eval_expr(e->args[0], s, benv), e->exponent);
  }
  throw VerifyError("unreachable expression kind");
}

// --- polynomial view --------------------------------------------------------

namespace {

using Poly = std::vector<Rational>; // ascending coefficients

Poly poly_const(const Rational& c) { return c == 0 ? Poly{} : Poly{c}; }

Poly poly_add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), Rational(0));
  for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, Rational(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

Poly poly_of(const ExprPtr& e, const std::string& tname, const State& s,
             const BoundEnv& benv) {
  switch (e->kind) {
    case ExprKind::Const: return poly_const(e->value);
    case ExprKind::Var: return poly_const(s.lookup(e->name));
    case ExprKind::Bound: {
      if (e->name == tname) return Poly{Rational(0), Rational(1)};
      auto it = benv.find(e->name);
      if (it == benv.end()) throw VerifyError("unbound variable: " + e->name);
      return poly_const(it->second);
    }
    case ExprKind::Neg: return poly_mul(poly_const(Rational(-1)),
                                        poly_of(e->args[0], tname, s, benv));
    case ExprKind::Add: {
      Poly acc;
      for (const auto& a : e->args) acc = poly_add(acc, poly_of(a, tname, s, benv));
      return acc;
    }
    case ExprKind::Mul: {
      Poly acc = poly_const(Rational(1));
      for (const auto& a : e->args) acc = poly_mul(acc, poly_of(a, tname, s, benv));
      return acc;
    }
    case ExprKind::Div: {
      Poly den = poly_of(e->args[1], tname, s, benv);
      if (den.size() > 1)
        throw VerifyError("not polynomial: division by " + expr_str(e->args[1]));
      if (den.empty()) throw VerifyError("division by zero in " + expr_str(e));
      Poly numr = poly_of(e->args[0], tname, s, benv);
      for (auto& c : numr) c /= den[0];
      return numr;
    }
    case ExprKind::Pow: {
      if (e->exponent < 0) {
        Poly b = poly_of(e->args[0], tname, s, benv);
        if (b.size() > 1) throw VerifyError("not polynomial: negative power");
        return poly_const(rat_pow(b.empty() ? Rational(0) : b[0], e->exponent));
      }
      Poly acc = poly_const(Rational(1));
      Poly b = poly_of(e->args[0], tname, s, benv);
      for (long i = 0; i < e->exponent; ++i) acc = poly_mul(acc, b);
      return acc;
    }
  }
  throw VerifyError("unreachable expression kind");
}

} // namespace

std::vector<Rational> poly_in_bound(const ExprPtr& e, const std::string& tname,
                                    const State& s, const BoundEnv& benv) {
  Poly p = poly_of(e, tname, s, benv);
  if (p.empty()) p.push_back(Rational(0));
  return p;
}

// --- printing ---------------------------------------------------------------

namespace {

// Precedence: Add 1, Mul/Div 2, unary 3, Pow 4, atom 5.
int expr_prec(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Add: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::Pow: return 4;
    case ExprKind::Const:
      // p/q must reparse as one constant, so it binds like a sum
      if (e.value.get_den() != 1) return 1;
      return e.value < 0 ? 3 : 5;
    default: return 5;
  }
}

void print_expr(std::ostream& os, const ExprPtr& e, int ctx);

void print_wrapped(std::ostream& os, const ExprPtr& e, int ctx) {
  if (expr_prec(*e) < ctx) {
    os << "(";
    print_expr(os, e, 0);
    os << ")";
  } else {
    print_expr(os, e, ctx);
  }
}

// True if t should print after a minus sign; strips the sign.
bool strip_negative(const ExprPtr& t, ExprPtr* stripped) {
  if (t->kind == ExprKind::Const && t->value < 0) {
    *stripped = num(Rational(-t->value));
    return true;
  }
  if (t->kind == ExprKind::Neg) {
    *stripped = t->args[0];
    return true;
  }
  if (t->kind == ExprKind::Mul && t->args[0]->kind == ExprKind::Const &&
      t->args[0]->value < 0) {
    std::vector<ExprPtr> args = t->args;
    Rational c = -args[0]->value;
    if (c == 1)
      args.erase(args.begin());
    else
      args[0] = num(c);
    *stripped = muln(std::move(args));
    return true;
  }
  return false;
}

void print_expr(std::ostream& os, const ExprPtr& e, int ctx) {
  switch (e->kind) {
    case ExprKind::Const:
      os << rat_str(e->value);
      return;
    case ExprKind::Var:
    case ExprKind::Bound:
      os << e->name;
      return;
    case ExprKind::Neg: {
      os << "-";
      const ExprPtr& c = e->args[0];
      if (c->kind == ExprKind::Var || c->kind == ExprKind::Bound ||
          c->kind == ExprKind::Pow ||
          (c->kind == ExprKind::Const && c->value >= 0 && c->value.get_den() == 1)) {
        print_expr(os, c, 3);
      } else {
        os << "(";
        print_expr(os, c, 0);
        os << ")";
      }
      return;
    }
    case ExprKind::Add: {
      for (size_t i = 0; i < e->args.size(); ++i) {
        ExprPtr stripped;
        if (i == 0) {
          print_wrapped(os, e->args[i], 2);
        } else if (strip_negative(e->args[i], &stripped)) {
          os << " - ";
          print_wrapped(os, stripped, 2);
        } else {
          os << " + ";
          print_wrapped(os, e->args[i], 2);
        }
      }
      return;
    }
    case ExprKind::Mul: {
      for (size_t i = 0; i < e->args.size(); ++i) {
        if (i) os << " * ";
        // later Div/negative factors need parens to reparse identically
        print_wrapped(os, e->args[i], i == 0 ? 2 : 3);
      }
      return;
    }
    case ExprKind::Div:
      print_wrapped(os, e->args[0], 2);
      os << " / ";
      print_wrapped(os, e->args[1], 3);
      return;
    case ExprKind::Pow: {
      const ExprPtr& b = e->args[0];
      if (b->kind == ExprKind::Var || b->kind == ExprKind::Bound ||
          (b->kind == ExprKind::Const && b->value >= 0 && b->value.get_den() == 1)) {
        print_expr(os, b, 5);
      } else {
        os << "(";
        print_expr(os, b, 0);
        os << ")";
      }
      os << "^" << e->exponent;
      return;
    }
  }
}

} // namespace

std::string expr_str(const ExprPtr& e) {
  std::ostringstream os;
  print_expr(os, e, 0);
  return os.str();
}

// --- boolean expressions ----------------------------------------------------

static BExprPtr mkb(BExpr b) { return std::make_shared<BExpr>(std::move(b)); }

BExprPtr btrue() {
  static BExprPtr t = mkb(BExpr{BKind::True});
  return t;
}

BExprPtr bfalse() {
  static BExprPtr f = mkb(BExpr{BKind::False});
  return f;
}

BExprPtr cmp(CmpOp op, ExprPtr lhs, ExprPtr rhs) {
  BExpr b;
  b.kind = BKind::Cmp;
  b.op = op;
  b.lhs = std::move(lhs);
  b.rhs = std::move(rhs);
  return mkb(std::move(b));
}

BExprPtr bnot(BExprPtr x) {
  BExpr b;
  b.kind = BKind::Not;
  b.args = {std::move(x)};
  return mkb(std::move(b));
}

BExprPtr bandn(std::vector<BExprPtr> args) {
  if (args.empty()) return btrue();
  if (args.size() == 1) return args[0];
  BExpr b;
  b.kind = BKind::And;
  b.args = std::move(args);
  return mkb(std::move(b));
}

BExprPtr band(BExprPtr a, BExprPtr b) { return bandn({std::move(a), std::move(b)}); }

BExprPtr born(std::vector<BExprPtr> args) {
  if (args.empty()) return bfalse();
  if (args.size() == 1) return args[0];
  BExpr b;
  b.kind = BKind::Or;
  b.args = std::move(args);
  return mkb(std::move(b));
}

BExprPtr bor(BExprPtr a, BExprPtr b) { return born({std::move(a), std::move(b)}); }

BExprPtr bimp(BExprPtr a, BExprPtr b) {
  BExpr x;
  x.kind = BKind::Imp;
  x.args = {std::move(a), std::move(b)};
  return mkb(std::move(x));
}

BExprPtr bexists(const std::string& v, BExprPtr body) {
  BExpr x;
  x.kind = BKind::Exists;
  x.evar = v;
  x.ebody = std::move(body);
  return mkb(std::move(x));
}

bool is_true(const BExprPtr& b) { return b->kind == BKind::True; }
bool is_false(const BExprPtr& b) { return b->kind == BKind::False; }

bool bexpr_equal(const BExprPtr& a, const BExprPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case BKind::True:
    case BKind::False: return true;
    case BKind::Cmp:
      return a->op == b->op && expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
    case BKind::Exists:
      return a->evar == b->evar && bexpr_equal(a->ebody, b->ebody);
    default: {
      if (a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!bexpr_equal(a->args[i], b->args[i])) return false;
      return true;
    }
  }
}

void collect_bexpr_vars(const BExprPtr& b, std::set<std::string>* prog,
                        std::set<std::string>* bound) {
  switch (b->kind) {
    case BKind::True:
    case BKind::False: return;
    case BKind::Cmp:
      collect_expr_vars(b->lhs, prog, bound);
      collect_expr_vars(b->rhs, prog, bound);
      return;
    case BKind::Exists: {
      std::set<std::string> inner;
      collect_bexpr_vars(b->ebody, prog ? &inner : nullptr, bound);
      if (prog) {
        inner.erase(b->evar);
        prog->insert(inner.begin(), inner.end());
      }
      return;
    }
    default:
      for (const auto& a : b->args) collect_bexpr_vars(a, prog, bound);
  }
}

template <bool OnBound>
static BExprPtr bsubst_impl(const BExprPtr& b, const std::map<std::string, ExprPtr>& sub) {
  if (sub.empty()) return b;
  switch (b->kind) {
    case BKind::True:
    case BKind::False: return b;
    case BKind::Cmp: {
      ExprPtr l = OnBound ? subst_bound(b->lhs, sub) : subst_vars(b->lhs, sub);
      ExprPtr r = OnBound ? subst_bound(b->rhs, sub) : subst_vars(b->rhs, sub);
      return cmp(b->op, std::move(l), std::move(r));
    }
    case BKind::Exists: {
      if (!OnBound && sub.count(b->evar)) {
        auto inner = sub;
        inner.erase(b->evar);
        return bexists(b->evar, bsubst_impl<OnBound>(b->ebody, inner));
      }
      return bexists(b->evar, bsubst_impl<OnBound>(b->ebody, sub));
    }
    default: {
      std::vector<BExprPtr> args;
      args.reserve(b->args.size());
      for (const auto& a : b->args) args.push_back(bsubst_impl<OnBound>(a, sub));
      BExpr out = *b;
      out.args = std::move(args);
      return mkb(std::move(out));
    }
  }
}

BExprPtr subst_vars(const BExprPtr& b, const std::map<std::string, ExprPtr>& sub) {
  return bsubst_impl<false>(b, sub);
}

BExprPtr subst_bound(const BExprPtr& b, const std::map<std::string, ExprPtr>& sub) {
  return bsubst_impl<true>(b, sub);
}

namespace {

bool cmp_holds(CmpOp op, const Rational& l, const Rational& r) {
  switch (op) {
    case CmpOp::Eq: return l == r;
    case CmpOp::Le: return l <= r;
    case CmpOp::Lt: return l < r;
    case CmpOp::Ge: return l >= r;
    case CmpOp::Gt: return l > r;
  }
  return false;
}

} // namespace

BExprPtr simplify(const BExprPtr& b) {
  switch (b->kind) {
    case BKind::True:
    case BKind::False: return b;
    case BKind::Cmp: {
      ExprPtr l = simplify(b->lhs);
      ExprPtr r = simplify(b->rhs);
      ExprPtr d = simplify(sub(l, r));
      if (d->kind == ExprKind::Const)
        return cmp_holds(b->op, d->value, Rational(0)) ? btrue() : bfalse();
      return cmp(b->op, std::move(l), std::move(r));
    }
    case BKind::Not: {
      BExprPtr a = simplify(b->args[0]);
      if (is_true(a)) return bfalse();
      if (is_false(a)) return btrue();
      if (a->kind == BKind::Not) return a->args[0];
      return bnot(std::move(a));
    }
    case BKind::And: {
      std::vector<BExprPtr> out;
      for (const auto& a : b->args) {
        BExprPtr s = simplify(a);
        if (is_false(s)) return bfalse();
        if (is_true(s)) continue;
        if (s->kind == BKind::And) {
          for (const auto& x : s->args) out.push_back(x);
        } else {
          out.push_back(std::move(s));
        }
      }
      std::vector<BExprPtr> dedup;
      for (const auto& x : out) {
        bool seen = false;
        for (const auto& y : dedup)
          if (bexpr_equal(x, y)) { seen = true; break; }
        if (!seen) dedup.push_back(x);
      }
      return bandn(std::move(dedup));
    }
    case BKind::Or: {
      std::vector<BExprPtr> out;
      for (const auto& a : b->args) {
        BExprPtr s = simplify(a);
        if (is_true(s)) return btrue();
        if (is_false(s)) continue;
        if (s->kind == BKind::Or) {
          for (const auto& x : s->args) out.push_back(x);
        } else {
          out.push_back(std::move(s));
        }
      }
      std::vector<BExprPtr> dedup;
      for (const auto& x : out) {
        bool seen = false;
        for (const auto& y : dedup)
          if (bexpr_equal(x, y)) { seen = true; break; }
        if (!seen) dedup.push_back(x);
      }
      return born(std::move(dedup));
    }
    case BKind::Imp: {
      BExprPtr a = simplify(b->args[0]);
      BExprPtr c = simplify(b->args[1]);
      if (is_false(a) || is_true(c)) return btrue();
      if (is_true(a)) return c;
      return bimp(std::move(a), std::move(c));
    }
    case BKind::Exists: {
      BExprPtr body = simplify(b->ebody);
      if (is_true(body) || is_false(body)) return body;
      return bexists(b->evar, std::move(body));
    }
  }
  throw VerifyError("unreachable boolean kind");
}

BExprPtr nnf(const BExprPtr& b) {
  switch (b->kind) {
    case BKind::True:
    case BKind::False:
    case BKind::Cmp: return b;
    case BKind::And: {
      std::vector<BExprPtr> args;
      for (const auto& a : b->args) args.push_back(nnf(a));
      return bandn(std::move(args));
    }
    case BKind::Or: {
      std::vector<BExprPtr> args;
      for (const auto& a : b->args) args.push_back(nnf(a));
      return born(std::move(args));
    }
    case BKind::Imp: return nnf(bor(bnot(b->args[0]), b->args[1]));
    case BKind::Exists: return bexists(b->evar, nnf(b->ebody));
    case BKind::Not: {
      const BExprPtr& a = b->args[0];
      switch (a->kind) {
        case BKind::True: return bfalse();
        case BKind::False: return btrue();
        case BKind::Not: return nnf(a->args[0]);
        case BKind::Cmp:
          switch (a->op) {
            case CmpOp::Eq:
              return bor(cmp(CmpOp::Lt, a->lhs, a->rhs), cmp(CmpOp::Gt, a->lhs, a->rhs));
            case CmpOp::Le: return cmp(CmpOp::Gt, a->lhs, a->rhs);
            case CmpOp::Lt: return cmp(CmpOp::Ge, a->lhs, a->rhs);
            case CmpOp::Ge: return cmp(CmpOp::Lt, a->lhs, a->rhs);
            case CmpOp::Gt: return cmp(CmpOp::Le, a->lhs, a->rhs);
          }
          break;
        case BKind::And: {
          std::vector<BExprPtr> args;
          for (const auto& x : a->args) args.push_back(nnf(bnot(x)));
          return born(std::move(args));
        }
        case BKind::Or: {
          std::vector<BExprPtr> args;
          for (const auto& x : a->args) args.push_back(nnf(bnot(x)));
          return bandn(std::move(args));
        }
        case BKind::Imp: return nnf(band(a->args[0], bnot(a->args[1])));
        case BKind::Exists:
          throw VerifyError("nnf: quantifier under negation");
      }
      break;
    }
  }
  throw VerifyError("unreachable boolean kind");
}

bool eval_bexpr(const BExprPtr& b, const State& s, const BoundEnv& benv) {
  switch (b->kind) {
    case BKind::True: return true;
    case BKind::False: return false;
    case BKind::Cmp:
      return cmp_holds(b->op, eval_expr(b->lhs, s, benv), eval_expr(b->rhs, s, benv));
    case BKind::Not: return !eval_bexpr(b->args[0], s, benv);
    case BKind::And:
      for (const auto& a : b->args)
        if (!eval_bexpr(a, s, benv)) return false;
      return true;
    case BKind::Or:
      for (const auto& a : b->args)
        if (eval_bexpr(a, s, benv)) return true;
      return false;
    case BKind::Imp:
      return !eval_bexpr(b->args[0], s, benv) || eval_bexpr(b->args[1], s, benv);
    case BKind::Exists:
      throw VerifyError("cannot evaluate existential quantifier concretely");
  }
  throw VerifyError("unreachable boolean kind");
}

namespace {

// Precedence: Imp 1, Or 2, And 3, Not 4, atoms 5; Exists lowest.
int bprec(const BExpr& b) {
  switch (b.kind) {
    case BKind::Exists:
    case BKind::Imp: return 1;
    case BKind::Or: return 2;
    case BKind::And: return 3;
    case BKind::Not: return 4;
    default: return 5;
  }
}

const char* cmp_sym(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Le: return "<=";
    case CmpOp::Lt: return "<";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
  }
  return "?";
}

void print_bexpr(std::ostream& os, const BExprPtr& b, int ctx);

void print_bwrapped(std::ostream& os, const BExprPtr& b, int ctx) {
  if (bprec(*b) < ctx) {
    os << "(";
    print_bexpr(os, b, 0);
    os << ")";
  } else {
    print_bexpr(os, b, ctx);
  }
}

void print_bexpr(std::ostream& os, const BExprPtr& b, int ctx) {
  switch (b->kind) {
    case BKind::True: os << "true"; return;
    case BKind::False: os << "false"; return;
    case BKind::Cmp:
      os << expr_str(b->lhs) << " " << cmp_sym(b->op) << " " << expr_str(b->rhs);
      return;
    case BKind::Not: {
      const BExprPtr& a = b->args[0];
      os << "!";
      if (a->kind == BKind::True || a->kind == BKind::False) {
        print_bexpr(os, a, 5);
      } else {
        os << "(";
        print_bexpr(os, a, 0);
        os << ")";
      }
      return;
    }
    case BKind::And: {
      for (size_t i = 0; i < b->args.size(); ++i) {
        if (i) os << " && ";
        print_bwrapped(os, b->args[i], 4);
      }
      return;
    }
    case BKind::Or: {
      for (size_t i = 0; i < b->args.size(); ++i) {
        if (i) os << " || ";
        print_bwrapped(os, b->args[i], 3);
      }
      return;
    }
    case BKind::Imp:
      print_bwrapped(os, b->args[0], 2);
      os << " -> ";
      print_bwrapped(os, b->args[1], 1);
      return;
    case BKind::Exists:
      os << "exists " << b->evar << ". ";
      print_bwrapped(os, b->ebody, 1);
      return;
  }
}

} // namespace

std::string bexpr_str(const BExprPtr& b) {
  std::ostringstream os;
  print_bexpr(os, b, 0);
  return os.str();
}

} // namespace hcspver
