#pragma once

// Random generators shared by the property tests.

#include "core/expr.hpp"
#include "lang/ast.hpp"

#include <random>

namespace hcspver {

struct test_rng {
  std::mt19937_64 eng;

  explicit test_rng(uint64_t seed) : eng(seed) {}

  long pick(long n) {
    std::uniform_int_distribution<long> d(0, n - 1);
    return d(eng);
  }

  Rational rational(long lo = -6, long hi = 6, long den = 2) {
    std::uniform_int_distribution<long> d(lo * den, hi * den);
    Rational r(d(eng), den);
    r.canonicalize();
    return r;
  }

  std::string varname() {
    static const char* names[] = {"x", "y", "z", "v", "p", "a"};
    return names[pick(6)];
  }

  ExprPtr expr(int depth) {
    if (depth == 0 || pick(3) == 0) {
      switch (pick(3)) {
        case 0: return num(rational());
        case 1: return var(varname());
        default: return var(varname());
      }
    }
    switch (pick(6)) {
      case 0: return add(expr(depth - 1), expr(depth - 1));
      case 1: return sub(expr(depth - 1), expr(depth - 1));
      case 2: return mul(expr(depth - 1), expr(depth - 1));
      case 3: {
        ExprPtr den = expr(depth - 1);
        try {
          return divide(expr(depth - 1), den);
        } catch (const VerifyError&) {
          return expr(depth - 1);
        }
      }
      case 4: return neg(expr(depth - 1));
      default: return powi(expr(depth - 1), pick(3));
    }
  }

  BExprPtr bexpr(int depth) {
    if (depth == 0 || pick(3) == 0) {
      switch (pick(6)) {
        case 0: return btrue();
        case 1: return bfalse();
        default: {
          CmpOp op = static_cast<CmpOp>(pick(5));
          return cmp(op, expr(1), expr(1));
        }
      }
    }
    switch (pick(4)) {
      case 0: return band(bexpr(depth - 1), bexpr(depth - 1));
      case 1: return bor(bexpr(depth - 1), bexpr(depth - 1));
      case 2: return bnot(bexpr(depth - 1));
      default: return bimp(bexpr(depth - 1), bexpr(depth - 1));
    }
  }

  State state_for(const ExprPtr& e) {
    std::set<std::string> prog;
    collect_expr_vars(e, &prog, nullptr);
    State s;
    for (const auto& v : prog) s.update(v, rational());
    return s;
  }

  State state_for(const BExprPtr& b) {
    std::set<std::string> prog;
    collect_bexpr_vars(b, &prog, nullptr);
    State s;
    for (const auto& v : prog) s.update(v, rational());
    return s;
  }
};

} // namespace hcspver
