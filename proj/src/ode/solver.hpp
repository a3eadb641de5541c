#pragma once

#include "core/expr.hpp"
#include "core/names.hpp"
#include "lang/ast.hpp"

#include <map>
#include <optional>
#include <vector>

namespace hcspver {

struct UnsupportedOde : VerifyError {
  using VerifyError::VerifyError;
};

// Closed-form solution of a linear system with nilpotent coefficient matrix;
// every component is a polynomial in the path time variable. Boundary data
// records when the domain constraint is first left.
struct OdeSolution {
  std::vector<OdeEq> eqs;
  std::map<std::string, ExprPtr> solution; // var -> Expr over (s0 vars, t)
  bool infinite = false;                   // domain is syntactically true
  std::string time_var;                    // fresh t_i (finite case)
  BExprPtr constraint;                     // boundary characterization over t_i
  bool explicit_boundary = false;          // constraint is t_i = closed form
  ExprPtr closed_form;                     // set when explicit_boundary
  BExprPtr least_crossing_goal;            // residual goal for implicit boundaries
  bool lipschitz_ok = true;
};

// True iff eqs lie in the supported class (linear, constant rational
// coefficients between ODE variables, arbitrary ODE-variable-free additive
// terms, nilpotent coefficient matrix).
bool check_lipschitz(const std::vector<OdeEq>& eqs);

// Throws UnsupportedOde outside the supported class; names the variables.
OdeSolution solve_ode(const std::vector<OdeEq>& eqs, const BExprPtr& domain,
                      FreshNames& fresh);

// Least boundary crossing for a concrete start state: time T > 0 with the
// domain true on [0,T) and false at T. nullopt means the domain never fails
// (evolution diverges). Requires every comparison to be at most linear in t
// along the solution.
std::optional<Rational> concrete_boundary(const OdeSolution& sol, const BExprPtr& domain,
                                          const State& s);

// Derivative with respect to a bound variable; defined for the polynomial
// fragment the solver emits.
ExprPtr deriv_bound(const ExprPtr& e, const std::string& tname);

} // namespace hcspver
