#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "atcg/atom.hpp"
#include "atcg/expr.hpp"

namespace atcg::petri {

struct Position {
  int x = 0;
  int y = 0;

  bool operator==(const Position&) const = default;
};

struct Place {
  std::string id;
  std::string name;
  std::uint32_t capacity = 0;  // 0 = unbounded
  Position position;

  bool operator==(const Place&) const = default;
};

struct Transition {
  std::string id;
  std::string name;
  std::optional<Expr> guard;
  bool silent = false;
  Position position;
  // Post-condition text carried through to generated test code.
  std::optional<std::string> annotation;

  bool operator==(const Transition&) const = default;
};

struct Variable {
  std::string name;

  bool operator==(const Variable&) const = default;
};

// One inscription item: a variable or a constant atom.
using Term = std::variant<Variable, Atom>;

// A tuple pattern matching exactly one token; empty = the Default token.
using Inscription = std::vector<Term>;

struct Arc {
  std::string id;
  std::string source;
  std::string target;
  Inscription inscription;

  bool operator==(const Arc&) const = default;
};

struct PrTNet {
  std::string id;
  std::vector<Place> places;
  std::vector<Transition> transitions;
  std::vector<Arc> arcs;
  std::vector<std::pair<std::string, Token>> init;  // initial tokens per place id

  const Place* find_place(const std::string& id) const;
  const Transition* find_transition(const std::string& id) const;
  const Place* find_place_by_name(const std::string& name) const;

  // Arcs into / out of a transition, in declaration order.
  std::vector<const Arc*> input_arcs(const std::string& transition) const;
  std::vector<const Arc*> output_arcs(const std::string& transition) const;

  bool operator==(const PrTNet&) const = default;
};

// Equality up to element order (ids are keys) and initial-token order.
bool structurally_equal(const PrTNet& a, const PrTNet& b);

// Orders ids with embedded numbers numerically: T2 < T10.
bool natural_less(const std::string& a, const std::string& b);

std::string inscription_to_string(const Inscription& ins);
std::set<std::string> inscription_variables(const Inscription& ins);

class Marking {
 public:
  Marking() = default;

  void add(const std::string& place, Token token);
  // Removes one copy; false when the place holds no such token.
  bool remove(const std::string& place, const Token& token);

  std::size_t count(const std::string& place) const;
  std::size_t count(const std::string& place, const Token& token) const;
  const std::multiset<Token>* tokens(const std::string& place) const;
  std::size_t total() const;
  bool empty() const { return places_.empty(); }

  const std::map<std::string, std::multiset<Token>>& places() const { return places_; }

  // `{P1: Default, name: (UID)}`; places by id, tokens sorted.
  std::string to_string() const;

  friend bool operator==(const Marking&, const Marking&) = default;

 private:
  // Invariant: no empty multisets are stored, so equal markings compare equal.
  std::map<std::string, std::multiset<Token>> places_;
};

// Injective key: equal markings produce equal keys and vice versa.
std::string canonical(const Marking& m);

Marking initial_marking(const PrTNet& net);

}  // namespace atcg::petri
