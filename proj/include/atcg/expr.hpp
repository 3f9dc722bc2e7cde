#pragma once

#include <set>
#include <string>
#include <vector>

#include "atcg/atom.hpp"

namespace atcg {

enum class ExprKind { Literal, Var, Compare, And, Or, Not };
enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

// Constraint expression tree (the OCL subset used for pre/post conditions
// and guards). Identifiers are variables; literals are Int, Text or Bool.
struct Expr {
  ExprKind kind = ExprKind::Literal;
  CompareOp op = CompareOp::Eq;
  Atom literal;
  std::string name;
  std::vector<Expr> args;

  static Expr lit(Atom a);
  static Expr var(std::string name);
  static Expr compare(CompareOp op, Expr lhs, Expr rhs);
  static Expr conj(Expr lhs, Expr rhs);
  static Expr disj(Expr lhs, Expr rhs);
  static Expr negate(Expr e);

  friend bool operator==(const Expr&, const Expr&) = default;
};

const char* to_string(CompareOp op) noexcept;

// Prints with the minimum parentheses needed to reparse into the same tree.
std::string print_expr(const Expr& e);

std::set<std::string> free_variables(const Expr& e);

}  // namespace atcg
