#include "ode/solver.hpp"

#include <algorithm>
#include <sstream>

namespace hcspver {

namespace {

struct LinearForm {
  std::map<std::string, Rational> coeffs; // ODE-variable coefficients
  std::vector<ExprPtr> affine;            // ODE-variable-free summands
};

bool has_ode_var(const ExprPtr& e, const std::set<std::string>& odevars) {
  std::set<std::string> prog, bound;
  collect_expr_vars(e, &prog, &bound);
  if (!bound.empty()) return true; // bound vars have no place in an ODE rhs
  for (const auto& v : prog)
    if (odevars.count(v)) return true;
  return false;
}

// rhs = sum of rational-constant multiples of ODE variables plus
// ODE-variable-free terms; anything else is out of class.
std::optional<LinearForm> linear_form(const ExprPtr& e,
                                      const std::set<std::string>& odevars) {
  LinearForm lf;
  ExprPtr s = simplify(e);
  std::vector<ExprPtr> terms;
  if (s->kind == ExprKind::Add)
    terms = s->args;
  else
    terms = {s};
  for (const auto& t : terms) {
    if (!has_ode_var(t, odevars)) {
      lf.affine.push_back(t);
      continue;
    }
    if (t->kind == ExprKind::Var) {
      lf.coeffs[t->name] += 1;
      continue;
    }
    if (t->kind == ExprKind::Mul) {
      Rational c(1);
      std::string v;
      bool bad = false;
      for (const auto& f : t->args) {
        if (f->kind == ExprKind::Const) {
          c *= f->value;
        } else if (f->kind == ExprKind::Var && odevars.count(f->name) && v.empty()) {
          v = f->name;
        } else {
          bad = true;
          break;
        }
      }
      if (!bad && !v.empty()) {
        lf.coeffs[v] += c;
        continue;
      }
    }
    return std::nullopt;
  }
  return lf;
}

using Matrix = std::vector<std::vector<Rational>>;

Matrix mat_mul(const Matrix& a, const Matrix& b) {
  size_t n = a.size();
  Matrix out(n, std::vector<Rational>(n, Rational(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

bool mat_zero(const Matrix& a) {
  for (const auto& row : a)
    for (const auto& x : row)
      if (x != 0) return false;
  return true;
}

struct System {
  std::vector<std::string> vars;
  Matrix a;
  std::vector<std::vector<ExprPtr>> b_terms; // affine summands per row
};

std::optional<System> parse_system(const std::vector<OdeEq>& eqs) {
  System sys;
  std::set<std::string> odevars;
  for (const auto& eq : eqs) {
    sys.vars.push_back(eq.var);
    odevars.insert(eq.var);
  }
  size_t n = sys.vars.size();
  sys.a.assign(n, std::vector<Rational>(n, Rational(0)));
  sys.b_terms.assign(n, {});
  for (size_t i = 0; i < n; ++i) {
    auto lf = linear_form(eqs[i].rhs, odevars);
    if (!lf) return std::nullopt;
    for (const auto& [v, c] : lf->coeffs) {
      size_t j = std::find(sys.vars.begin(), sys.vars.end(), v) - sys.vars.begin();
      sys.a[i][j] = c;
    }
    sys.b_terms[i] = lf->affine;
  }
  return sys;
}

bool nilpotent(const Matrix& a) {
  Matrix p = a;
  for (size_t k = 0; k < a.size(); ++k) {
    if (mat_zero(p)) return true;
    p = mat_mul(p, a);
  }
  return mat_zero(p);
}

std::string var_list(const std::vector<OdeEq>& eqs) {
  std::ostringstream os;
  for (size_t i = 0; i < eqs.size(); ++i) {
    if (i) os << ", ";
    os << eqs[i].var;
  }
  return os.str();
}

// Symbolic polynomial coefficients of e in the bound variable tname.
std::vector<ExprPtr> sym_poly(const ExprPtr& e, const std::string& tname) {
  auto scale = [](const std::vector<ExprPtr>& p, const ExprPtr& c) {
    std::vector<ExprPtr> out;
    for (const auto& x : p) out.push_back(mul(c, x));
    return out;
  };
  switch (e->kind) {
    case ExprKind::Const:
    case ExprKind::Var: return {e};
    case ExprKind::Bound:
      if (e->name == tname) return {num(0), num(1)};
      return {e};
    case ExprKind::Neg: return scale(sym_poly(e->args[0], tname), num(-1));
    case ExprKind::Add: {
      std::vector<ExprPtr> acc;
      for (const auto& a : e->args) {
        auto p = sym_poly(a, tname);
        if (p.size() > acc.size()) acc.resize(p.size(), nullptr);
        for (size_t i = 0; i < p.size(); ++i)
          acc[i] = acc[i] ? add(acc[i], p[i]) : p[i];
      }
      for (auto& c : acc)
        if (!c) c = num(0);
      return acc;
    }
    case ExprKind::Mul: {
      std::vector<ExprPtr> acc{num(1)};
      for (const auto& a : e->args) {
        auto p = sym_poly(a, tname);
        std::vector<ExprPtr> next(acc.size() + p.size() - 1, nullptr);
        for (size_t i = 0; i < acc.size(); ++i)
          for (size_t j = 0; j < p.size(); ++j) {
            ExprPtr prod = mul(acc[i], p[j]);
            next[i + j] = next[i + j] ? add(next[i + j], prod) : prod;
          }
        for (auto& c : next)
          if (!c) c = num(0);
        acc = std::move(next);
      }
      return acc;
    }
    case ExprKind::Div: {
      auto den = sym_poly(e->args[1], tname);
      if (den.size() > 1)
        throw VerifyError("boundary expression divides by the time variable");
      std::vector<ExprPtr> out;
      for (const auto& c : sym_poly(e->args[0], tname))
        out.push_back(divide(c, den[0]));
      return out;
    }
    case ExprKind::Pow: {
      if (e->exponent < 0) {
        auto b = sym_poly(e->args[0], tname);
        if (b.size() > 1) throw VerifyError("negative power of the time variable");
        return {powi(b[0], e->exponent)};
      }
      std::vector<ExprPtr> acc{num(1)};
      for (long k = 0; k < e->exponent; ++k) {
        auto p = sym_poly(e->args[0], tname);
        std::vector<ExprPtr> next(acc.size() + p.size() - 1, nullptr);
        for (size_t i = 0; i < acc.size(); ++i)
          for (size_t j = 0; j < p.size(); ++j) {
            ExprPtr prod = mul(acc[i], p[j]);
            next[i + j] = next[i + j] ? add(next[i + j], prod) : prod;
          }
        for (auto& c : next)
          if (!c) c = num(0);
        acc = std::move(next);
      }
      return acc;
    }
  }
  throw VerifyError("unreachable expression kind");
}

} // namespace

ExprPtr deriv_bound(const ExprPtr& e, const std::string& tname) {
  switch (e->kind) {
    case ExprKind::Const:
    case ExprKind::Var: return num(0);
    case ExprKind::Bound: return e->name == tname ? num(1) : num(0);
    case ExprKind::Neg: return neg(deriv_bound(e->args[0], tname));
    case ExprKind::Add: {
      std::vector<ExprPtr> out;
      for (const auto& a : e->args) out.push_back(deriv_bound(a, tname));
      return addn(std::move(out));
    }
    case ExprKind::Mul: {
      std::vector<ExprPtr> sum;
      for (size_t i = 0; i < e->args.size(); ++i) {
        std::vector<ExprPtr> prod;
        for (size_t j = 0; j < e->args.size(); ++j)
          prod.push_back(i == j ? deriv_bound(e->args[j], tname) : e->args[j]);
        sum.push_back(muln(std::move(prod)));
      }
      return addn(std::move(sum));
    }
    case ExprKind::Div: {
      std::set<std::string> bound;
      collect_expr_vars(e->args[1], nullptr, &bound);
      if (bound.count(tname))
        throw VerifyError("cannot differentiate division by the time variable");
      return divide(deriv_bound(e->args[0], tname), e->args[1]);
    }
    case ExprKind::Pow: {
      ExprPtr inner = deriv_bound(e->args[0], tname);
      ExprPtr scaled = mul(num(e->exponent), powi(e->args[0], e->exponent - 1));
      return mul(std::move(scaled), std::move(inner));
    }
  }
  throw VerifyError("unreachable expression kind");
}

bool check_lipschitz(const std::vector<OdeEq>& eqs) {
  auto sys = parse_system(eqs);
  return sys && nilpotent(sys->a);
}

OdeSolution solve_ode(const std::vector<OdeEq>& eqs, const BExprPtr& domain,
                      FreshNames& fresh) {
  auto sys = parse_system(eqs);
  if (!sys)
    throw UnsupportedOde("ODE system is not linear with constant coefficients: " +
                         var_list(eqs));
  if (!nilpotent(sys->a))
    throw UnsupportedOde(
        "ODE system has non-polynomial solutions (non-nilpotent coefficients): " +
        var_list(eqs));

  size_t n = sys->vars.size();
  OdeSolution out;
  out.eqs = eqs;
  out.lipschitz_ok = true;

  // x(t) = sum_k A^k x0 t^k/k!  +  sum_k A^k b t^(k+1)/(k+1)!
  Matrix power(n, std::vector<Rational>(n, Rational(0)));
  for (size_t i = 0; i < n; ++i) power[i][i] = 1;
  std::vector<std::vector<ExprPtr>> terms(n);
  Rational fact(1);
  for (size_t k = 0; k <= n; ++k) {
    if (k > 0) fact *= Rational(static_cast<long>(k));
    ExprPtr tk = k == 0 ? nullptr
                        : (k == 1 ? bvar(kPathTime) : powi(bvar(kPathTime), (long)k));
    ExprPtr tk1 = k + 1 == 1 ? bvar(kPathTime) : powi(bvar(kPathTime), (long)k + 1);
    Rational fact1 = fact * Rational(static_cast<long>(k + 1));
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        if (power[i][j] == 0) continue;
        // homogeneous part
        ExprPtr coeff = num(Rational(power[i][j] / fact));
        ExprPtr x0 = var(sys->vars[j]);
        terms[i].push_back(k == 0 ? mul(coeff, x0) : muln({coeff, x0, tk}));
        // forcing part
        for (const auto& bt : sys->b_terms[j]) {
          ExprPtr c2 = num(Rational(power[i][j] / fact1));
          terms[i].push_back(muln({c2, bt, tk1}));
        }
      }
    }
    power = mat_mul(power, sys->a);
    if (mat_zero(power)) break;
  }
  for (size_t i = 0; i < n; ++i)
    out.solution[sys->vars[i]] = simplify(addn(terms[i]));

  // the solution must satisfy the system and the initial condition
  std::map<std::string, ExprPtr> sol_sub;
  for (const auto& [v, e] : out.solution) sol_sub[v] = e;
  for (size_t i = 0; i < n; ++i) {
    ExprPtr lhs = deriv_bound(out.solution[sys->vars[i]], kPathTime);
    ExprPtr rhs = subst_vars(eqs[i].rhs, sol_sub);
    if (simplify(sub(lhs, rhs))->kind != ExprKind::Const ||
        simplify(sub(lhs, rhs))->value != 0)
      throw VerifyError("internal: ODE solution fails the system for " + sys->vars[i]);
    std::map<std::string, ExprPtr> zero{{kPathTime, num(0)}};
    if (!expr_equal(simplify(subst_bound(out.solution[sys->vars[i]], zero)),
                    var(sys->vars[i])))
      throw VerifyError("internal: ODE solution fails the initial condition for " +
                        sys->vars[i]);
  }

  BExprPtr dom = simplify(domain);
  if (is_true(dom)) {
    out.infinite = true;
    return out;
  }

  out.time_var = fresh.fresh_time();
  ExprPtr ti = var(out.time_var);
  if (is_false(dom)) {
    out.explicit_boundary = true;
    out.closed_form = num(0);
    out.constraint = cmp(CmpOp::Eq, ti, num(0));
    return out;
  }

  // substitute the solution into the domain, then try a closed form for a
  // single comparison that is linear in t with constant slope
  BExprPtr along = subst_vars(dom, sol_sub);
  if (along->kind == BKind::Cmp) {
    ExprPtr g = simplify(sub(along->lhs, along->rhs));
    auto poly = sym_poly(g, kPathTime);
    for (auto& c : poly) c = simplify(c);
    while (poly.size() > 1 && poly.back()->kind == ExprKind::Const &&
           poly.back()->value == 0)
      poly.pop_back();
    if (poly.size() == 2 && poly[1]->kind == ExprKind::Const) {
      out.explicit_boundary = true;
      out.closed_form =
          simplify(mul(num(Rational(Rational(-1) / poly[1]->value)), poly[0]));
      out.constraint = cmp(CmpOp::Eq, ti, out.closed_form);
      return out;
    }
  }

  // implicit boundary: t_i >= 0, domain fails at t_i; the least-crossing
  // property is handed back as a residual goal over a fresh sample time
  std::map<std::string, ExprPtr> at_ti{{kPathTime, ti}};
  BExprPtr fails_at = simplify(bnot(subst_bound(along, at_ti)));
  out.constraint = band(cmp(CmpOp::Ge, ti, num(0)), fails_at);
  std::string u = fresh.fresh_time();
  std::map<std::string, ExprPtr> at_u{{kPathTime, var(u)}};
  out.least_crossing_goal =
      bimp(band(cmp(CmpOp::Le, num(0), var(u)), cmp(CmpOp::Lt, var(u), ti)),
           simplify(subst_bound(along, at_u)));
  return out;
}

std::optional<Rational> concrete_boundary(const OdeSolution& sol, const BExprPtr& domain,
                                          const State& s) {
  std::map<std::string, ExprPtr> sol_sub;
  for (const auto& [v, e] : sol.solution) sol_sub[v] = e;
  BExprPtr along = subst_vars(simplify(domain), sol_sub);

  std::vector<Rational> candidates;
  std::function<void(const BExprPtr&)> collect = [&](const BExprPtr& b) {
    switch (b->kind) {
      case BKind::True:
      case BKind::False: return;
      case BKind::Cmp: {
        auto p = poly_in_bound(simplify(sub(b->lhs, b->rhs)), kPathTime, s);
        if (p.size() > 2)
          throw VerifyError(
              "boundary crossing is not linear in time along the solution");
        if (p.size() == 2 && p[1] != 0) {
          Rational root = -p[0] / p[1];
          if (root > 0) candidates.push_back(root);
        }
        return;
      }
      case BKind::Exists:
        throw VerifyError("quantifier in ODE domain");
      default:
        for (const auto& a : b->args) collect(a);
    }
  };
  collect(along);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  auto holds_at = [&](const Rational& t) {
    return eval_bexpr(along, s, {{kPathTime, t}});
  };
  Rational prev(0);
  for (const auto& c : candidates) {
    Rational mid = (prev + c) / 2;
    if (!holds_at(mid))
      throw VerifyError("domain fails on an open interval; no representable crossing");
    if (!holds_at(c)) return c;
    prev = c;
  }
  if (!holds_at(prev + 1)) // no atom flips past the last candidate
    throw VerifyError("domain fails on an open interval; no representable crossing");
  return std::nullopt;
}

} // namespace hcspver
