#pragma once

#include "lang/ast.hpp"

#include <string>

namespace hcspver {

struct ParseError : VerifyError {
  int line;
  int column;
  ParseError(const std::string& msg, int line_, int col_)
      : VerifyError(msg + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
        line(line_), column(col_) {}
};

ProcessPtr parse_process(const std::string& text);
ExprPtr parse_expr(const std::string& text);
BExprPtr parse_bexpr(const std::string& text);

} // namespace hcspver
