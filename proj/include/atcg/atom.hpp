#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace atcg {

enum class AtomKind { Symbol, Int, Text, Bool };

// A constant value carried by tokens, message arguments and expressions.
class Atom {
 public:
  Atom() : value_(Symbol{}) {}

  static Atom symbol(std::string name) { return Atom(Symbol{std::move(name)}); }
  static Atom integer(std::int64_t v) { return Atom(v); }
  static Atom text(std::string v) { return Atom(Text{std::move(v)}); }
  static Atom boolean(bool v) { return Atom(v); }

  AtomKind kind() const noexcept { return static_cast<AtomKind>(value_.index()); }
  bool is_symbol() const noexcept { return kind() == AtomKind::Symbol; }
  bool is_int() const noexcept { return kind() == AtomKind::Int; }
  bool is_text() const noexcept { return kind() == AtomKind::Text; }
  bool is_bool() const noexcept { return kind() == AtomKind::Bool; }

  // Symbol name or text payload.
  const std::string& str() const;
  std::int64_t as_int() const { return std::get<std::int64_t>(value_); }
  bool as_bool() const { return std::get<bool>(value_); }

  // Symbol -> UID, Int -> 42, Text -> "a \"b\"", Bool -> true.
  std::string to_string() const;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
    return a.value_ <=> b.value_;
  }

 private:
  struct Symbol {
    std::string name;
    friend bool operator==(const Symbol&, const Symbol&) = default;
    friend std::strong_ordering operator<=>(const Symbol&, const Symbol&) = default;
  };
  struct Text {
    std::string value;
    friend bool operator==(const Text&, const Text&) = default;
    friend std::strong_ordering operator<=>(const Text&, const Text&) = default;
  };

  template <typename T>
  explicit Atom(T v) : value_(std::move(v)) {}

  std::variant<Symbol, std::int64_t, Text, bool> value_;
};

// A token is a tuple of atoms; the empty tuple is the Default token.
using Token = std::vector<Atom>;

using Binding = std::map<std::string, Atom>;

bool is_identifier(std::string_view s) noexcept;
bool is_keyword(std::string_view s) noexcept;

// Double-quoted literal with \" and \\ escapes.
std::string quote(std::string_view raw);

// Parses a single atom written the way Atom::to_string renders it.
// Throws Error("bad-atom").
Atom parse_atom(std::string_view text);

// `(a1, a2)` style; the Default token renders as `Default`.
std::string token_to_string(const Token& t);
std::string binding_to_string(const Binding& b);

}  // namespace atcg
