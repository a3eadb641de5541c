#pragma once

#include "core/rational.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace hcspver {

struct VerifyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Arithmetic expressions
//
// Two disjoint name classes: program variables (Var) name coordinates of the
// starting state, bound variables (Bound) are introduced by binders (delay d,
// value v, path time t). Substitution on one class never touches the other,
// which is what makes binder manipulation capture-free.
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind { Const, Var, Bound, Neg, Add, Mul, Div, Pow };

struct Expr {
  ExprKind kind;
  Rational value;            // Const
  std::string name;          // Var, Bound
  std::vector<ExprPtr> args; // Neg:1, Add:n, Mul:n, Div:2, Pow:1
  long exponent = 0;         // Pow
};

ExprPtr num(long n);
ExprPtr num(const Rational& r);
ExprPtr var(const std::string& name);
ExprPtr bvar(const std::string& name);
ExprPtr neg(ExprPtr e);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr addn(std::vector<ExprPtr> args);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr muln(std::vector<ExprPtr> args);
// Rejects a syntactically-zero constant denominator.
ExprPtr divide(ExprPtr a, ExprPtr b);
ExprPtr powi(ExprPtr base, long exponent);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

void collect_expr_vars(const ExprPtr& e, std::set<std::string>* prog,
                       std::set<std::string>* bound);

// Simultaneous substitution of program variables.
ExprPtr subst_vars(const ExprPtr& e, const std::map<std::string, ExprPtr>& sub);
// Simultaneous substitution of bound variables.
ExprPtr subst_bound(const ExprPtr& e, const std::map<std::string, ExprPtr>& sub);

// Constant folding, 0/1 elimination, flattening of nested sums/products and
// cancellation of syntactically equal terms. Idempotent, evaluation-preserving.
ExprPtr simplify(const ExprPtr& e);

std::string expr_str(const ExprPtr& e);

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

struct State {
  std::map<std::string, Rational> values;

  bool has(const std::string& x) const { return values.count(x) != 0; }
  const Rational& lookup(const std::string& x) const;
  void update(const std::string& x, const Rational& v) { values[x] = v; }
  bool operator==(const State& o) const { return values == o.values; }
};

// Defined only on disjoint domains.
State merge_disjoint(const State& a, const State& b);

std::string state_str(const State& s);

using BoundEnv = std::map<std::string, Rational>;

Rational eval_expr(const ExprPtr& e, const State& s, const BoundEnv& benv = {});

// Coefficients (ascending) of e viewed as a polynomial in bound variable
// `tname`; all other variables resolved through s/benv. Throws if e is not
// polynomial in tname.
std::vector<Rational> poly_in_bound(const ExprPtr& e, const std::string& tname,
                                    const State& s, const BoundEnv& benv = {});

// ---------------------------------------------------------------------------
// Boolean expressions
// ---------------------------------------------------------------------------

enum class CmpOp { Eq, Le, Lt, Ge, Gt };

struct BExpr;
using BExprPtr = std::shared_ptr<const BExpr>;

enum class BKind { True, False, Cmp, Not, And, Or, Imp, Exists };

struct BExpr {
  BKind kind;
  CmpOp op = CmpOp::Eq;      // Cmp
  ExprPtr lhs, rhs;          // Cmp
  std::vector<BExprPtr> args; // Not:1, And:n, Or:n, Imp:2
  std::string evar;          // Exists (program-variable namespace)
  BExprPtr ebody;            // Exists
};

BExprPtr btrue();
BExprPtr bfalse();
BExprPtr cmp(CmpOp op, ExprPtr lhs, ExprPtr rhs);
BExprPtr bnot(BExprPtr b);
BExprPtr band(BExprPtr a, BExprPtr b);
BExprPtr bandn(std::vector<BExprPtr> args);
BExprPtr bor(BExprPtr a, BExprPtr b);
BExprPtr born(std::vector<BExprPtr> args);
BExprPtr bimp(BExprPtr a, BExprPtr b);
BExprPtr bexists(const std::string& v, BExprPtr body);

bool bexpr_equal(const BExprPtr& a, const BExprPtr& b);
bool is_true(const BExprPtr& b);
bool is_false(const BExprPtr& b);

void collect_bexpr_vars(const BExprPtr& b, std::set<std::string>* prog,
                        std::set<std::string>* bound);

BExprPtr subst_vars(const BExprPtr& b, const std::map<std::string, ExprPtr>& sub);
BExprPtr subst_bound(const BExprPtr& b, const std::map<std::string, ExprPtr>& sub);

BExprPtr simplify(const BExprPtr& b);

// Negation normal form: negations pushed to comparisons, implications
// expanded. Errors on quantifiers under negation.
BExprPtr nnf(const BExprPtr& b);

bool eval_bexpr(const BExprPtr& b, const State& s, const BoundEnv& benv = {});

std::string bexpr_str(const BExprPtr& b);

} // namespace hcspver
