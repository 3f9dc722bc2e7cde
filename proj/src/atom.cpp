#include "atcg/atom.hpp"

#include <array>
#include <charconv>

#include "atcg/error.hpp"

namespace atcg {

const std::string& Atom::str() const {
  if (const auto* s = std::get_if<Symbol>(&value_)) return s->name;
  return std::get<Text>(value_).value;
}

std::string Atom::to_string() const {
  switch (kind()) {
    case AtomKind::Symbol:
      return str();
    case AtomKind::Int:
      return std::to_string(as_int());
    case AtomKind::Text:
      return quote(str());
    case AtomKind::Bool:
      return as_bool() ? "true" : "false";
  }
  return {};
}

bool is_keyword(std::string_view s) noexcept {
  static constexpr std::array<std::string_view, 5> kKeywords = {
      "and", "or", "not", "true", "false"};
  for (auto k : kKeywords) {
    if (k == s) return true;
  }
  return false;
}

bool is_identifier(std::string_view s) noexcept {
  if (s.empty()) return false;
  auto alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  if (!alpha(s.front())) return false;
  for (char c : s) {
    if (!alpha(c) && !(c >= '0' && c <= '9')) return false;
  }
  return true;
}

std::string quote(std::string_view raw) {
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

Atom parse_atom(std::string_view text) {
  auto fail = [&] {
    return Error("bad-atom", "not an atom: '" + std::string(text) + "'");
  };
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t' ||
                           text.front() == '\n' || text.front() == '\r')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' ||
                           text.back() == '\n' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (text.empty()) throw fail();
  if (text == "true") return Atom::boolean(true);
  if (text == "false") return Atom::boolean(false);
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') throw fail();
    std::string value;
    for (std::size_t i = 1; i + 1 < text.size(); ++i) {
      char c = text[i];
      if (c == '\\') {
        if (i + 2 >= text.size()) throw fail();
        c = text[++i];
        if (c != '"' && c != '\\') throw fail();
      } else if (c == '"') {
        throw fail();
      }
      value += c;
    }
    return Atom::text(std::move(value));
  }
  if (text.front() == '-' || (text.front() >= '0' && text.front() <= '9')) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) throw fail();
    return Atom::integer(v);
  }
  if (is_identifier(text) && !is_keyword(text)) return Atom::symbol(std::string(text));
  throw fail();
}

std::string token_to_string(const Token& t) {
  if (t.empty()) return "Default";
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ", ";
    out += t[i].to_string();
  }
  out += ')';
  return out;
}

std::string binding_to_string(const Binding& b) {
  std::string out = "{";
  bool first = true;
  for (const auto& [var, value] : b) {
    if (!first) out += ", ";
    first = false;
    out += var + "->" + value.to_string();
  }
  out += '}';
  return out;
}

}  // namespace atcg
