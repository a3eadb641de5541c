#include "doctest.h"

#include "lang/parser.hpp"
#include "ode/solver.hpp"
#include "support/random_gen.hpp"

#include <cmath>

using namespace hcspver;

namespace {

// Fixed-step RK4 over doubles; the independent numeric reference.
std::map<std::string, double> rk4(const std::vector<OdeEq>& eqs,
                                  const State& s0, double tmax, int steps) {
  std::map<std::string, double> y;
  for (const auto& [k, v] : s0.values) y[k] = rat_double(v);
  auto deriv = [&](const std::map<std::string, double>& st) {
    State s;
    for (const auto& [k, v] : st) {
      // exact rationals are not needed for the numeric reference
      s.update(k, Rational(static_cast<long>(std::llround(v * 1e12)), 1000000000000L));
    }
    std::map<std::string, double> d;
    for (const auto& eq : eqs) d[eq.var] = rat_double(eval_expr(eq.rhs, s));
    return d;
  };
  double h = tmax / steps;
  for (int i = 0; i < steps; ++i) {
    auto k1 = deriv(y);
    auto shift = [&](const std::map<std::string, double>& k, double f) {
      auto out = y;
      for (const auto& [v, dv] : k) out[v] += f * dv;
      return out;
    };
    auto k2 = deriv(shift(k1, h / 2));
    auto k3 = deriv(shift(k2, h / 2));
    auto k4 = deriv(shift(k3, h));
    for (const auto& eq : eqs) {
      const std::string& v = eq.var;
      y[v] += h / 6 * (k1[v] + 2 * k2[v] + 2 * k3[v] + k4[v]);
    }
  }
  return y;
}

} // namespace

TEST_CASE("unit-rate clock") {
  FreshNames fresh;
  OdeSolution sol = solve_ode({{"x", num(1)}}, cmp(CmpOp::Lt, var("x"), num(5)), fresh);
  CHECK(expr_str(sol.solution.at("x")) == "x + t");
  CHECK(!sol.infinite);
  CHECK(sol.time_var == "t1");
  CHECK(sol.explicit_boundary);
  CHECK(expr_str(sol.closed_form) == "5 - x");
  CHECK(bexpr_str(sol.constraint) == "t1 = 5 - x");
}

TEST_CASE("double integrator") {
  FreshNames fresh;
  OdeSolution sol =
      solve_ode({{"p", var("v")}, {"v", var("a")}}, btrue(), fresh);
  CHECK(sol.infinite);
  CHECK(expr_str(sol.solution.at("p")) == "p + v * t + (1/2) * a * t^2");
  CHECK(expr_str(sol.solution.at("v")) == "v + a * t");
}

TEST_CASE("constant solution with a false domain") {
  FreshNames fresh;
  OdeSolution sol =
      solve_ode({{"x", num(0)}}, cmp(CmpOp::Lt, var("x"), var("x")), fresh);
  CHECK(sol.explicit_boundary);
  CHECK(expr_str(sol.closed_form) == "0");
}

TEST_CASE("class membership") {
  CHECK(check_lipschitz({{"x", num(1)}}));
  CHECK(check_lipschitz({{"p", var("v")}, {"v", var("a")}}));
  CHECK(!check_lipschitz({{"x", mul(var("x"), var("x"))}}));
  CHECK(!check_lipschitz({{"x", var("x")}})); // exponential solution
  FreshNames fresh;
  CHECK_THROWS_AS(solve_ode({{"x", powi(var("x"), 2)}}, btrue(), fresh),
                  UnsupportedOde);
  CHECK_THROWS_AS(solve_ode({{"x", var("x")}}, btrue(), fresh), UnsupportedOde);
}

TEST_CASE("quadratic boundary stays implicit") {
  FreshNames fresh;
  // 2*am*(op - p) > v^2 along the double integrator
  BExprPtr domain = cmp(CmpOp::Gt, mul(mul(num(2), var("am")), sub(var("op"), var("p"))),
                        powi(var("v"), 2));
  OdeSolution sol = solve_ode({{"p", var("v")}, {"v", var("a")}}, domain, fresh);
  CHECK(!sol.infinite);
  CHECK(!sol.explicit_boundary);
  CHECK(sol.least_crossing_goal);
  // constraint pins t1 >= 0 and the domain failing at t1
  std::string c = bexpr_str(sol.constraint);
  CHECK(c.find("t1 >= 0") != std::string::npos);
}

TEST_CASE("solutions match RK4 within 1e-9 relative") {
  test_rng rng(31);
  std::vector<std::vector<OdeEq>> systems = {
      {{"x", num(1)}},
      {{"x", num(0)}},
      {{"p", var("v")}, {"v", var("a")}},
      {{"p", var("v")}, {"v", var("a")}, {"a", num(0)}},
      {{"x", add(var("y"), num(1))}, {"y", num(2)}},
      {{"x", sub(var("u"), var("y"))}, {"y", var("w")}}, // u, w external symbols
  };
  for (const auto& eqs : systems) {
    FreshNames fresh;
    OdeSolution sol = solve_ode(eqs, btrue(), fresh);
    for (int trial = 0; trial < 10; ++trial) {
      State s0;
      std::set<std::string> vars;
      for (const auto& eq : eqs) {
        vars.insert(eq.var);
        collect_expr_vars(eq.rhs, &vars, nullptr);
      }
      for (const auto& v : vars) s0.update(v, rng.rational(-3, 3, 4));
      for (int tt = 0; tt < 10; ++tt) {
        Rational t = rng.rational(0, 10, 4);
        auto numeric = rk4(eqs, s0, rat_double(t), 400);
        for (const auto& eq : eqs) {
          Rational exact = eval_expr(sol.solution.at(eq.var), s0, {{kPathTime, t}});
          double e = rat_double(exact);
          double n = numeric.at(eq.var);
          CHECK(std::abs(e - n) <= 1e-9 * (1 + std::abs(e)));
        }
      }
    }
  }
}

TEST_CASE("solution at zero is the start state") {
  FreshNames fresh;
  OdeSolution sol =
      solve_ode({{"p", var("v")}, {"v", var("a")}}, btrue(), fresh);
  std::map<std::string, ExprPtr> zero{{kPathTime, num(0)}};
  for (const auto& [v, e] : sol.solution)
    CHECK(expr_equal(simplify(subst_bound(e, zero)), var(v)));
}

TEST_CASE("explicit boundary brackets the crossing") {
  FreshNames fresh;
  OdeSolution sol = solve_ode({{"x", num(2)}}, cmp(CmpOp::Lt, var("x"), num(7)), fresh);
  REQUIRE(sol.explicit_boundary);
  test_rng rng(37);
  for (int i = 0; i < 50; ++i) {
    State s0;
    s0.update("x", rng.rational(-5, 5, 2));
    Rational t1 = eval_expr(sol.closed_form, s0);
    if (t1 <= 0) continue;
    BoundEnv at_t1{{kPathTime, t1}};
    BoundEnv before{{kPathTime, Rational(t1 * Rational(9, 10))}};
    Rational x_at = eval_expr(sol.solution.at("x"), s0, at_t1);
    Rational x_before = eval_expr(sol.solution.at("x"), s0, before);
    CHECK(x_at == 7);
    CHECK(x_before < 7);
  }
}

TEST_CASE("concrete boundary computation") {
  FreshNames fresh;
  State s;
  s.update("x", rat(0));
  OdeSolution sol = solve_ode({{"x", num(1)}}, cmp(CmpOp::Lt, var("x"), num(5)), fresh);
  auto b = concrete_boundary(sol, cmp(CmpOp::Lt, var("x"), num(5)), s);
  REQUIRE(b.has_value());
  CHECK(*b == rat(5));

  OdeSolution inf = solve_ode({{"x", num(1)}}, btrue(), fresh);
  CHECK(!concrete_boundary(inf, btrue(), s).has_value());
}
