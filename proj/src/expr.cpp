#include "atcg/expr.hpp"

namespace atcg {

Expr Expr::lit(Atom a) {
  Expr e;
  e.kind = ExprKind::Literal;
  e.literal = std::move(a);
  return e;
}

Expr Expr::var(std::string name) {
  Expr e;
  e.kind = ExprKind::Var;
  e.name = std::move(name);
  return e;
}

Expr Expr::compare(CompareOp op, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = ExprKind::Compare;
  e.op = op;
  e.args = {std::move(lhs), std::move(rhs)};
  return e;
}

Expr Expr::conj(Expr lhs, Expr rhs) {
  Expr e;
  e.kind = ExprKind::And;
  e.args = {std::move(lhs), std::move(rhs)};
  return e;
}

Expr Expr::disj(Expr lhs, Expr rhs) {
  Expr e;
  e.kind = ExprKind::Or;
  e.args = {std::move(lhs), std::move(rhs)};
  return e;
}

Expr Expr::negate(Expr inner) {
  Expr e;
  e.kind = ExprKind::Not;
  e.args = {std::move(inner)};
  return e;
}

const char* to_string(CompareOp op) noexcept {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "<>";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "?";
}

namespace {

// Grammar levels: or(1) < and(2) < not(3) < compare(4) < term(5).
int level(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Or: return 1;
    case ExprKind::And: return 2;
    case ExprKind::Not: return 3;
    case ExprKind::Compare: return 4;
    default: return 5;
  }
}

void print(const Expr& e, std::string& out);

void print_at(const Expr& e, int min_level, std::string& out) {
  if (level(e) < min_level) {
    out += '(';
    print(e, out);
    out += ')';
  } else {
    print(e, out);
  }
}

void print(const Expr& e, std::string& out) {
  switch (e.kind) {
    case ExprKind::Literal:
      out += e.literal.to_string();
      break;
    case ExprKind::Var:
      out += e.name;
      break;
    case ExprKind::Compare:
      print_at(e.args[0], 5, out);
      out += ' ';
      out += to_string(e.op);
      out += ' ';
      print_at(e.args[1], 5, out);
      break;
    case ExprKind::And:
      // Left-associative: the right operand needs parens at equal level.
      print_at(e.args[0], 2, out);
      out += " and ";
      print_at(e.args[1], 3, out);
      break;
    case ExprKind::Or:
      print_at(e.args[0], 1, out);
      out += " or ";
      print_at(e.args[1], 2, out);
      break;
    case ExprKind::Not:
      out += "not ";
      print_at(e.args[0], 4, out);
      break;
  }
}

void collect(const Expr& e, std::set<std::string>& vars) {
  if (e.kind == ExprKind::Var) vars.insert(e.name);
  for (const auto& a : e.args) collect(a, vars);
}

}  // namespace

std::string print_expr(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> vars;
  collect(e, vars);
  return vars;
}

}  // namespace atcg
