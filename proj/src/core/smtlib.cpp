#include "core/smtlib.hpp"

#include <sstream>

namespace hcspver {

namespace {

std::string smt_name(const std::string& raw) {
  bool plain = !raw.empty();
  for (char c : raw)
    if (!(isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) plain = false;
  if (plain && !isdigit(static_cast<unsigned char>(raw[0]))) return raw;
  return "|" + raw + "|";
}

std::string smt_rat(const Rational& r) {
  std::ostringstream os;
  Rational a = r;
  bool negative = a < 0;
  if (negative) a = -a;
  std::string core;
  if (a.get_den() == 1)
    core = a.get_num().get_str();
  else
    core = "(/ " + a.get_num().get_str() + " " + a.get_den().get_str() + ")";
  if (negative) return "(- " + core + ")";
  return core;
}

void emit_expr(std::ostream& os, const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Const: os << smt_rat(e->value); return;
    case ExprKind::Var:
    case ExprKind::Bound: os << smt_name(e->name); return;
    case ExprKind::Neg:
      os << "(- ";
      emit_expr(os, e->args[0]);
      os << ")";
      return;
    case ExprKind::Add:
    case ExprKind::Mul: {
      os << (e->kind == ExprKind::Add ? "(+" : "(*");
      for (const auto& a : e->args) {
        os << " ";
        emit_expr(os, a);
      }
      os << ")";
      return;
    }
    case ExprKind::Div:
      os << "(/ ";
      emit_expr(os, e->args[0]);
      os << " ";
      emit_expr(os, e->args[1]);
      os << ")";
      return;
    case ExprKind::Pow: {
      if (e->exponent < 0)
        throw VerifyError("unsupported construct in SMT export: negative exponent in " +
                          expr_str(e));
      if (e->exponent == 0) {
        os << "1";
        return;
      }
      if (e->exponent == 1) {
        emit_expr(os, e->args[0]);
        return;
      }
      os << "(*";
      for (long i = 0; i < e->exponent; ++i) {
        os << " ";
        emit_expr(os, e->args[0]);
      }
      os << ")";
      return;
    }
  }
}

const char* smt_cmp(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Le: return "<=";
    case CmpOp::Lt: return "<";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
  }
  return "=";
}

void emit_bexpr(std::ostream& os, const BExprPtr& b, bool allow_exists) {
  switch (b->kind) {
    case BKind::True: os << "true"; return;
    case BKind::False: os << "false"; return;
    case BKind::Cmp:
      os << "(" << smt_cmp(b->op) << " ";
      emit_expr(os, b->lhs);
      os << " ";
      emit_expr(os, b->rhs);
      os << ")";
      return;
    case BKind::Not:
      os << "(not ";
      emit_bexpr(os, b->args[0], false);
      os << ")";
      return;
    case BKind::And:
    case BKind::Or: {
      os << (b->kind == BKind::And ? "(and" : "(or");
      for (const auto& a : b->args) {
        os << " ";
        emit_bexpr(os, a, allow_exists);
      }
      os << ")";
      return;
    }
    case BKind::Imp:
      os << "(=> ";
      emit_bexpr(os, b->args[0], false);
      os << " ";
      emit_bexpr(os, b->args[1], allow_exists);
      os << ")";
      return;
    case BKind::Exists:
      throw VerifyError("unsupported construct in SMT export: existential " + b->evar +
                        " outside a Skolemizable position");
  }
}

// Replaces positive existentials by fresh constants.
BExprPtr skolemize(const BExprPtr& b, int* counter,
                   std::vector<std::string>* fresh) {
  switch (b->kind) {
    case BKind::Exists: {
      std::string name = b->evar + "!sk" + std::to_string((*counter)++);
      fresh->push_back(name);
      std::map<std::string, ExprPtr> sub{{b->evar, var(name)}};
      return skolemize(subst_vars(b->ebody, sub), counter, fresh);
    }
    case BKind::And: {
      std::vector<BExprPtr> args;
      for (const auto& a : b->args) args.push_back(skolemize(a, counter, fresh));
      return bandn(std::move(args));
    }
    default:
      return b;
  }
}

} // namespace

std::string smt_expr(const ExprPtr& e) {
  std::ostringstream os;
  emit_expr(os, e);
  return os.str();
}

std::string smt_bexpr(const BExprPtr& b) {
  std::ostringstream os;
  emit_bexpr(os, b, false);
  return os.str();
}

std::string to_smtlib(const BExprPtr& goal, const BExprPtr& hyp) {
  int counter = 0;
  std::vector<std::string> fresh;
  BExprPtr h = skolemize(hyp, &counter, &fresh);

  std::set<std::string> names;
  collect_bexpr_vars(h, &names, &names);
  collect_bexpr_vars(goal, &names, &names);

  std::ostringstream os;
  os << "(set-logic QF_NRA)\n";
  for (const auto& n : names) os << "(declare-const " << smt_name(n) << " Real)\n";
  os << "(assert ";
  emit_bexpr(os, h, true);
  os << ")\n(assert (not ";
  emit_bexpr(os, goal, false);
  os << "))\n(check-sat)\n";
  return os.str();
}

} // namespace hcspver
