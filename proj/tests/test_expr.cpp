#include "doctest.h"

#include "core/expr.hpp"
#include "core/smtlib.hpp"
#include "support/random_gen.hpp"

using namespace hcspver;

TEST_CASE("simplify identity laws") {
  auto e = simplify(add(num(0), mul(var("x"), num(1))));
  CHECK(expr_str(e) == "x");
  CHECK(expr_str(simplify(mul(var("x"), num(0)))) == "0");
}

TEST_CASE("simplify cancels equal subtrees") {
  auto five_minus_x = sub(num(5), var("x"));
  CHECK(expr_str(simplify(sub(five_minus_x, five_minus_x))) == "0");
}

TEST_CASE("substitution basics") {
  auto e = add(var("x"), bvar("t"));
  auto r = subst_vars(e, {{"x", add(var("x"), bvar("d"))}});
  CHECK(expr_str(r) == "(x + d) + t");

  CHECK(expr_str(simplify(subst_vars(sub(num(5), var("x")), {{"x", num(0)}}))) == "5");

  auto untouched = subst_vars(mul(var("v"), var("T")), {{"a", num(7)}});
  CHECK(expr_str(untouched) == "v * T");
}

TEST_CASE("eval basics") {
  State s;
  s.update("x", rat(1));
  CHECK(eval_expr(add(var("x"), bvar("t")), s, {{"t", rat(2)}}) == rat(3));
  s.update("x", rat(5));
  CHECK(!eval_bexpr(cmp(CmpOp::Lt, var("x"), num(5)), s));
  CHECK_THROWS_WITH_AS(eval_expr(var("missing"), s), "unbound variable: missing",
                       VerifyError);
  CHECK_THROWS_AS(eval_expr(divide(var("x"), sub(var("x"), var("x"))), s), VerifyError);
}

TEST_CASE("eval matches an independent recomputation") {
  // p + v*T + 1/2*da*T^2 against a second evaluator
  auto e = add(add(var("p"), mul(var("v"), var("T"))),
               mul(mul(divide(num(1), num(2)), var("da")), powi(var("T"), 2)));
  test_rng rng(7);
  for (int i = 0; i < 200; ++i) {
    State s;
    for (auto v : {"p", "v", "T", "da"}) s.update(v, rng.rational());
    Rational expect = s.lookup("p") + s.lookup("v") * s.lookup("T") +
                      Rational(1, 2) * s.lookup("da") * s.lookup("T") * s.lookup("T");
    CHECK(eval_expr(e, s) == expect);
  }
}

TEST_CASE("simplify is evaluation-preserving and idempotent") {
  test_rng rng(11);
  int checked = 0;
  for (int i = 0; i < 10000; ++i) {
    ExprPtr e = rng.expr(4);
    ExprPtr s1;
    try {
      s1 = simplify(e);
    } catch (const VerifyError&) {
      continue; // division by syntactic zero discovered during rewriting
    }
    ExprPtr s2 = simplify(s1);
    CHECK(expr_equal(s1, s2));
    State st = rng.state_for(e);
    Rational a, b;
    try {
      a = eval_expr(e, st);
      b = eval_expr(s1, st);
    } catch (const VerifyError&) {
      continue; // runtime division by zero; simplification may legally differ
    }
    CHECK(a == b);
    ++checked;
  }
  CHECK(checked > 5000);
}

TEST_CASE("substitution lemma") {
  test_rng rng(13);
  for (int i = 0; i < 2000; ++i) {
    ExprPtr e = rng.expr(3);
    ExprPtr r = rng.expr(2);
    State st = rng.state_for(e);
    State str = rng.state_for(r);
    for (const auto& [k, v] : str.values)
      if (!st.has(k)) st.update(k, v);
    std::string x = "x";
    if (!st.has(x)) st.update(x, rng.rational());
    Rational lhs, rhs;
    try {
      lhs = eval_expr(subst_vars(e, {{x, r}}), st);
      State st2 = st;
      st2.update(x, eval_expr(r, st));
      rhs = eval_expr(e, st2);
    } catch (const VerifyError&) {
      continue;
    }
    CHECK(lhs == rhs);
  }
}

TEST_CASE("nnf preserves evaluation") {
  test_rng rng(17);
  for (int i = 0; i < 3000; ++i) {
    BExprPtr b = rng.bexpr(3);
    State st = rng.state_for(b);
    bool va, vb;
    try {
      va = eval_bexpr(b, st);
      vb = eval_bexpr(nnf(b), st);
    } catch (const VerifyError&) {
      continue;
    }
    CHECK(va == vb);
  }
}

TEST_CASE("state merge requires disjoint domains") {
  State a, b;
  a.update("x", rat(1));
  b.update("y", rat(2));
  State m = merge_disjoint(a, b);
  CHECK(m.lookup("x") == rat(1));
  CHECK(m.lookup("y") == rat(2));
  b.update("x", rat(3));
  CHECK_THROWS_AS(merge_disjoint(a, b), VerifyError);
}

TEST_CASE("smtlib export shape") {
  std::string script = to_smtlib(cmp(CmpOp::Eq, var("x"), var("x")), btrue());
  CHECK(script.find("(set-logic QF_NRA)") == 0);
  CHECK(script.find("(declare-const x Real)") != std::string::npos);
  CHECK(script.find("(assert (not (= x x)))") != std::string::npos);
  CHECK(script.find("(check-sat)") != std::string::npos);

  // declares both the boundary variable and the state variable
  auto goal = band(cmp(CmpOp::Eq, var("t1"), sub(num(5), var("x"))),
                   cmp(CmpOp::Ge, var("t1"), num(0)));
  std::string s2 = to_smtlib(goal, btrue());
  CHECK(s2.find("(declare-const t1 Real)") != std::string::npos);
  CHECK(s2.find("(declare-const x Real)") != std::string::npos);
}

TEST_CASE("smtlib export parses back as s-expressions") {
  auto goal = band(cmp(CmpOp::Eq, var("t1"), sub(num(5), var("x"))),
                   cmp(CmpOp::Ge, var("t1"), num(0)));
  std::string script = to_smtlib(goal, cmp(CmpOp::Lt, var("x"), num(5)));
  // minimal s-expression reader: balanced parens, collects declared names
  int depth = 0;
  std::set<std::string> declared;
  for (size_t i = 0; i < script.size(); ++i) {
    if (script[i] == '(') ++depth;
    if (script[i] == ')') {
      --depth;
      CHECK(depth >= 0);
    }
    if (script.compare(i, 14, "(declare-const") == 0) {
      size_t j = script.find(' ', i + 15);
      declared.insert(script.substr(i + 15, j - (i + 15)));
    }
  }
  CHECK(depth == 0);
  CHECK(declared == std::set<std::string>{"t1", "x"});
}

TEST_CASE("existentials skolemize in the hypothesis") {
  BExprPtr hyp = bexists("v", cmp(CmpOp::Eq, var("x"), add(var("v"), num(1))));
  std::string script = to_smtlib(cmp(CmpOp::Ge, var("x"), var("x")), hyp);
  CHECK(script.find("v!sk0") != std::string::npos);
  CHECK_THROWS_AS(to_smtlib(hyp, btrue()), VerifyError);
}
