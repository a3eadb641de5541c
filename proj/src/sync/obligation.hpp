#pragma once

#include "core/expr.hpp"

#include <string>
#include <vector>

namespace hcspver {

// Residual real-arithmetic fact handed to an external solver.
//   Valid:  hyp -> goal must hold (script is unsat)
//   Unsat:  hyp itself must be unsatisfiable (prune witness; goal is false)
//   Audit:  recorded for inspection only, never counted as a failure
struct Obligation {
  enum class Expect { Valid, Unsat, Audit };
  std::string origin;
  BExprPtr hyp;
  BExprPtr goal;
  Expect expect = Expect::Valid;
};

} // namespace hcspver
