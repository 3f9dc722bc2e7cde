#include <charconv>
#include <string>
#include <vector>

#include "atcg/error.hpp"
#include "atcg/ingest.hpp"

namespace atcg::ingest {
namespace {

enum class Tok { Ident, Int, String, True, False, And, Or, Not, LParen, RParen, Cmp, End };

struct Lexeme {
  Tok kind;
  std::string text;
  std::size_t offset;
  CompareOp op = CompareOp::Eq;
};

std::vector<Lexeme> lex(std::string_view s) {
  std::vector<Lexeme> out;
  std::size_t i = 0;
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  while (i < s.size()) {
    char c = s[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (c == '(') {
      out.push_back({Tok::LParen, "(", start});
      ++i;
    } else if (c == ')') {
      out.push_back({Tok::RParen, ")", start});
      ++i;
    } else if (c == '=') {
      out.push_back({Tok::Cmp, "=", start, CompareOp::Eq});
      ++i;
    } else if (c == '<') {
      if (i + 1 < s.size() && s[i + 1] == '>') {
        out.push_back({Tok::Cmp, "<>", start, CompareOp::Ne});
        i += 2;
      } else if (i + 1 < s.size() && s[i + 1] == '=') {
        out.push_back({Tok::Cmp, "<=", start, CompareOp::Le});
        i += 2;
      } else {
        out.push_back({Tok::Cmp, "<", start, CompareOp::Lt});
        ++i;
      }
    } else if (c == '>') {
      if (i + 1 < s.size() && s[i + 1] == '=') {
        out.push_back({Tok::Cmp, ">=", start, CompareOp::Ge});
        i += 2;
      } else {
        out.push_back({Tok::Cmp, ">", start, CompareOp::Gt});
        ++i;
      }
    } else if (c == '"') {
      std::string value;
      ++i;
      bool closed = false;
      while (i < s.size()) {
        if (s[i] == '\\') {
          if (i + 1 >= s.size() || (s[i + 1] != '"' && s[i + 1] != '\\')) {
            throw Error("lex-error", "bad escape in string literal", i);
          }
          value += s[i + 1];
          i += 2;
        } else if (s[i] == '"') {
          ++i;
          closed = true;
          break;
        } else {
          value += s[i++];
        }
      }
      if (!closed) throw Error("lex-error", "unterminated string literal", start);
      out.push_back({Tok::String, std::move(value), start});
    } else if (is_digit(c) || (c == '-' && i + 1 < s.size() && is_digit(s[i + 1]))) {
      ++i;
      while (i < s.size() && is_digit(s[i])) ++i;
      out.push_back({Tok::Int, std::string(s.substr(start, i - start)), start});
    } else if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
      while (i < s.size() && ((s[i] >= 'a' && s[i] <= 'z') || (s[i] >= 'A' && s[i] <= 'Z') ||
                              s[i] == '_' || is_digit(s[i]))) {
        ++i;
      }
      std::string word(s.substr(start, i - start));
      Tok kind = Tok::Ident;
      if (word == "and") kind = Tok::And;
      else if (word == "or") kind = Tok::Or;
      else if (word == "not") kind = Tok::Not;
      else if (word == "true") kind = Tok::True;
      else if (word == "false") kind = Tok::False;
      out.push_back({kind, std::move(word), start});
    } else {
      throw Error("lex-error", std::string("unexpected character '") + c + "'", start);
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class ExprParser {
 public:
  explicit ExprParser(std::vector<Lexeme> toks) : toks_(std::move(toks)) {}

  Expr parse() {
    Expr e = or_expr();
    if (cur().kind != Tok::End) fail("unexpected '" + cur().text + "'");
    return e;
  }

 private:
  const Lexeme& cur() const { return toks_[pos_]; }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error("parse-error",
                what + " at offset " + std::to_string(cur().offset), cur().offset);
  }

  Expr or_expr() {
    Expr lhs = and_expr();
    while (cur().kind == Tok::Or) {
      ++pos_;
      lhs = Expr::disj(std::move(lhs), and_expr());
    }
    return lhs;
  }

  Expr and_expr() {
    Expr lhs = not_expr();
    while (cur().kind == Tok::And) {
      ++pos_;
      lhs = Expr::conj(std::move(lhs), not_expr());
    }
    return lhs;
  }

  Expr not_expr() {
    if (cur().kind == Tok::Not) {
      ++pos_;
      return Expr::negate(cmp());
    }
    return cmp();
  }

  Expr cmp() {
    Expr lhs = term();
    if (cur().kind == Tok::Cmp) {
      CompareOp op = cur().op;
      ++pos_;
      Expr rhs = term();
      if (cur().kind == Tok::Cmp) fail("comparison operators do not chain");
      return Expr::compare(op, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr term() {
    const Lexeme& t = cur();
    switch (t.kind) {
      case Tok::Ident:
        ++pos_;
        return Expr::var(t.text);
      case Tok::Int: {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc()) fail("integer literal out of range");
        ++pos_;
        return Expr::lit(Atom::integer(v));
      }
      case Tok::String:
        ++pos_;
        return Expr::lit(Atom::text(t.text));
      case Tok::True:
        ++pos_;
        return Expr::lit(Atom::boolean(true));
      case Tok::False:
        ++pos_;
        return Expr::lit(Atom::boolean(false));
      case Tok::LParen: {
        ++pos_;
        Expr inner = or_expr();
        if (cur().kind != Tok::RParen) fail("expected ')'");
        ++pos_;
        return inner;
      }
      case Tok::End:
        fail("unexpected end of expression");
      default:
        fail("unexpected '" + t.text + "'");
    }
  }

  std::vector<Lexeme> toks_;
  std::size_t pos_ = 0;
};

Atom value_of(const Expr& e, const Binding& b);

bool truth(const Expr& e, const Binding& b) {
  Atom v = value_of(e, b);
  if (!v.is_bool()) {
    throw Error("type-mismatch", "'" + print_expr(e) + "' is not boolean");
  }
  return v.as_bool();
}

bool equal_atoms(const Atom& a, const Atom& b) {
  const bool a_str = a.is_symbol() || a.is_text();
  const bool b_str = b.is_symbol() || b.is_text();
  if (a_str && b_str) return a.str() == b.str();
  if (a.is_int() && b.is_int()) return a.as_int() == b.as_int();
  if (a.is_bool() && b.is_bool()) return a.as_bool() == b.as_bool();
  return false;
}

Atom value_of(const Expr& e, const Binding& b) {
  switch (e.kind) {
    case ExprKind::Literal:
      return e.literal;
    case ExprKind::Var: {
      auto it = b.find(e.name);
      if (it == b.end()) throw Error("unbound-variable", "variable '" + e.name + "' is unbound");
      return it->second;
    }
    case ExprKind::Not:
      return Atom::boolean(!truth(e.args[0], b));
    case ExprKind::And:
      return Atom::boolean(truth(e.args[0], b) && truth(e.args[1], b));
    case ExprKind::Or:
      return Atom::boolean(truth(e.args[0], b) || truth(e.args[1], b));
    case ExprKind::Compare: {
      Atom lhs = value_of(e.args[0], b);
      Atom rhs = value_of(e.args[1], b);
      if (e.op == CompareOp::Eq) return Atom::boolean(equal_atoms(lhs, rhs));
      if (e.op == CompareOp::Ne) return Atom::boolean(!equal_atoms(lhs, rhs));
      if (!lhs.is_int() || !rhs.is_int()) {
        throw Error("type-mismatch", std::string("ordering '") + to_string(e.op) +
                                         "' needs integers: " + lhs.to_string() + ", " +
                                         rhs.to_string());
      }
      const auto l = lhs.as_int(), r = rhs.as_int();
      switch (e.op) {
        case CompareOp::Lt: return Atom::boolean(l < r);
        case CompareOp::Le: return Atom::boolean(l <= r);
        case CompareOp::Gt: return Atom::boolean(l > r);
        case CompareOp::Ge: return Atom::boolean(l >= r);
        default: break;
      }
    }
  }
  throw Error("internal", "malformed expression");
}

}  // namespace

Expr parse_expr(std::string_view text) { return ExprParser(lex(text)).parse(); }

bool eval_expr(const Expr& e, const Binding& binding) { return truth(e, binding); }

}  // namespace atcg::ingest
