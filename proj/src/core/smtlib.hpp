#pragma once

#include "core/expr.hpp"

#include <string>

namespace hcspver {

// SMT-LIB v2 script over QF_NRA asserting hyp && !goal; unsat means hyp
// entails goal. Positive existentials in hyp are Skolemized to fresh
// constants; a quantifier anywhere else is an error naming the construct.
std::string to_smtlib(const BExprPtr& goal, const BExprPtr& hyp);

std::string smt_expr(const ExprPtr& e);
std::string smt_bexpr(const BExprPtr& b);

} // namespace hcspver
