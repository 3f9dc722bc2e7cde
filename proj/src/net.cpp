#include "atcg/net.hpp"

#include <algorithm>
#include <cctype>

namespace atcg::petri {

const Place* PrTNet::find_place(const std::string& pid) const {
  for (const auto& p : places) {
    if (p.id == pid) return &p;
  }
  return nullptr;
}

const Place* PrTNet::find_place_by_name(const std::string& pname) const {
  for (const auto& p : places) {
    if (p.name == pname) return &p;
  }
  return nullptr;
}

const Transition* PrTNet::find_transition(const std::string& tid) const {
  for (const auto& t : transitions) {
    if (t.id == tid) return &t;
  }
  return nullptr;
}

std::vector<const Arc*> PrTNet::input_arcs(const std::string& transition) const {
  std::vector<const Arc*> out;
  for (const auto& a : arcs) {
    if (a.target == transition) out.push_back(&a);
  }
  return out;
}

std::vector<const Arc*> PrTNet::output_arcs(const std::string& transition) const {
  std::vector<const Arc*> out;
  for (const auto& a : arcs) {
    if (a.source == transition) out.push_back(&a);
  }
  return out;
}

namespace {

template <typename T>
std::vector<T> sorted_by_id(std::vector<T> items) {
  std::sort(items.begin(), items.end(),
            [](const T& a, const T& b) { return natural_less(a.id, b.id); });
  return items;
}

}  // namespace

bool structurally_equal(const PrTNet& a, const PrTNet& b) {
  auto init_a = a.init, init_b = b.init;
  std::sort(init_a.begin(), init_a.end());
  std::sort(init_b.begin(), init_b.end());
  return a.id == b.id && sorted_by_id(a.places) == sorted_by_id(b.places) &&
         sorted_by_id(a.transitions) == sorted_by_id(b.transitions) &&
         sorted_by_id(a.arcs) == sorted_by_id(b.arcs) && init_a == init_b;
}

bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  while (i < a.size() && j < b.size()) {
    if (digit(a[i]) && digit(b[j])) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && digit(a[ie])) ++ie;
      while (je < b.size() && digit(b[je])) ++je;
      // Compare numerically without overflow: strip leading zeros, then length.
      std::size_t is = i, js = j;
      while (is + 1 < ie && a[is] == '0') ++is;
      while (js + 1 < je && b[js] == '0') ++js;
      if (ie - is != je - js) return ie - is < je - js;
      int c = a.compare(is, ie - is, b, js, je - js);
      if (c != 0) return c < 0;
      if (ie - i != je - j) return ie - i < je - j;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

std::string inscription_to_string(const Inscription& ins) {
  std::string out;
  for (std::size_t i = 0; i < ins.size(); ++i) {
    if (i) out += ',';
    if (const auto* v = std::get_if<Variable>(&ins[i])) {
      out += v->name;
    } else {
      const Atom& a = std::get<Atom>(ins[i]);
      // Bare identifiers are variables, so symbol constants are single-quoted.
      out += a.is_symbol() ? "'" + a.str() + "'" : a.to_string();
    }
  }
  return out;
}

std::set<std::string> inscription_variables(const Inscription& ins) {
  std::set<std::string> vars;
  for (const auto& term : ins) {
    if (const auto* v = std::get_if<Variable>(&term)) vars.insert(v->name);
  }
  return vars;
}

void Marking::add(const std::string& place, Token token) {
  places_[place].insert(std::move(token));
}

bool Marking::remove(const std::string& place, const Token& token) {
  auto it = places_.find(place);
  if (it == places_.end()) return false;
  auto tok = it->second.find(token);
  if (tok == it->second.end()) return false;
  it->second.erase(tok);
  if (it->second.empty()) places_.erase(it);
  return true;
}

std::size_t Marking::count(const std::string& place) const {
  auto it = places_.find(place);
  return it == places_.end() ? 0 : it->second.size();
}

std::size_t Marking::count(const std::string& place, const Token& token) const {
  auto it = places_.find(place);
  return it == places_.end() ? 0 : it->second.count(token);
}

const std::multiset<Token>* Marking::tokens(const std::string& place) const {
  auto it = places_.find(place);
  return it == places_.end() ? nullptr : &it->second;
}

std::size_t Marking::total() const {
  std::size_t n = 0;
  for (const auto& [p, toks] : places_) n += toks.size();
  return n;
}

std::string Marking::to_string() const {
  std::string out = "{";
  bool first_place = true;
  for (const auto& [p, toks] : places_) {
    if (!first_place) out += ", ";
    first_place = false;
    out += p + ": ";
    bool first = true;
    for (const auto& t : toks) {
      if (!first) out += " ";
      first = false;
      out += token_to_string(t);
    }
  }
  out += '}';
  return out;
}

std::string canonical(const Marking& m) {
  std::string key;
  for (const auto& [p, toks] : m.places()) {
    key += quote(p);
    key += '[';
    for (const auto& t : toks) {
      key += '(';
      for (const auto& a : t) {
        key += "sitb"[static_cast<int>(a.kind())];
        key += a.to_string();
        key += ';';
      }
      key += ')';
    }
    key += ']';
  }
  return key;
}

Marking initial_marking(const PrTNet& net) {
  Marking m;
  for (const auto& [place, token] : net.init) m.add(place, token);
  return m;
}

}  // namespace atcg::petri
