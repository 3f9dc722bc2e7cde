#pragma once

#include <string_view>

#include "atcg/atom.hpp"
#include "atcg/expr.hpp"
#include "atcg/model.hpp"

namespace atcg::ingest {

// Grammar (precedence not > and > or; comparisons do not chain):
//   expr    := andExpr { "or" andExpr }
//   andExpr := notExpr { "and" notExpr }
//   notExpr := [ "not" ] cmp
//   cmp     := term [ ("="|"<>"|"<"|"<="|">"|">=") term ]
//   term    := IDENT | INT | STRING | "true" | "false" | "(" expr ")"
// Throws Error("lex-error" | "parse-error") carrying the byte offset.
Expr parse_expr(std::string_view text);

// Ints compare numerically; Symbols and Texts compare by content and only
// for (in)equality; ordering on anything but Int throws "type-mismatch".
// Throws "unbound-variable" for a free variable missing from `binding`.
bool eval_expr(const Expr& e, const Binding& binding);

// Reads an ATCG-XML design model. Throws Error with codes "xml-syntax",
// "unknown-element", "unknown-attribute", "missing-attribute",
// "missing-<element>", "duplicate-element", "duplicate-id", "bad-expr",
// "bad-atom", "bad-integer", "unexpected-text".
model::DesignModel parse_model_xml(std::string_view input);

}  // namespace atcg::ingest
