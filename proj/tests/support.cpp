#include "support.hpp"

#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace atcg::test {

std::string fixture(const std::string& name) { return std::string(ATCG_FIXTURE_DIR) + "/" + name; }
std::string golden(const std::string& name) { return std::string(ATCG_GOLDEN_DIR) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

namespace {

int pick(std::mt19937& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

const std::vector<Atom>& colours() {
  static const std::vector<Atom> kColours = {Atom::symbol("a"), Atom::symbol("b")};
  return kColours;
}

}  // namespace

petri::PrTNet random_net(std::mt19937& rng, const RandomNetShape& shape) {
  petri::PrTNet net;
  net.id = "rnd" + std::to_string(pick(rng, 0, 9999));
  const int np = pick(rng, 1, shape.max_places);
  const int nt = pick(rng, 1, shape.max_transitions);
  // Each place carries one arity: 0 (Default tokens) or 1 (symbol tokens).
  std::vector<int> arity(np);
  for (int i = 0; i < np; ++i) {
    petri::Place p;
    p.id = "P" + std::to_string(i + 1);
    p.name = pick(rng, 0, 3) == 0 ? "place" + std::to_string(i + 1) : p.id;
    p.capacity = shape.capacities && pick(rng, 0, 5) == 0 ? pick(rng, 1, 3) : 0;
    p.position = {30 + 195 * i, pick(rng, 0, 1) ? 105 : 300};
    arity[i] = pick(rng, 0, 1);
    net.places.push_back(p);
  }
  const int tokens = pick(rng, 1, shape.max_tokens);
  for (int k = 0; k < tokens; ++k) {
    const int i = pick(rng, 0, np - 1);
    Token t;
    if (arity[i]) t.push_back(colours()[pick(rng, 0, 1)]);
    std::size_t already = 0;
    for (const auto& [pl, _] : net.init) already += pl == net.places[i].id;
    if (net.places[i].capacity && already >= net.places[i].capacity) continue;
    net.init.push_back({net.places[i].id, t});
  }
  int arc_no = 0;
  for (int j = 0; j < nt; ++j) {
    petri::Transition t;
    t.id = "T" + std::to_string(j + 1);
    t.name = "op" + std::to_string(j + 1);
    t.silent = pick(rng, 0, 6) == 0;
    t.position = {127 + 195 * j, t.silent ? 190 : 105};
    std::vector<std::string> vars;
    const int nin = pick(rng, 0, 2);
    for (int k = 0; k < nin; ++k) {
      const int i = pick(rng, 0, np - 1);
      petri::Inscription ins;
      if (arity[i]) {
        if (pick(rng, 0, 3) == 0) {
          ins.push_back(colours()[pick(rng, 0, 1)]);
        } else {
          std::string v = pick(rng, 0, 1) ? "x" : "y";
          ins.push_back(petri::Variable{v});
          vars.push_back(v);
        }
      }
      net.arcs.push_back({"A" + std::to_string(++arc_no), net.places[i].id, t.id, ins});
    }
    const int nout = pick(rng, 0, 2);
    for (int k = 0; k < nout; ++k) {
      const int i = pick(rng, 0, np - 1);
      petri::Inscription ins;
      if (arity[i]) {
        if (!vars.empty() && pick(rng, 0, 2) != 0) {
          ins.push_back(petri::Variable{vars[pick(rng, 0, static_cast<int>(vars.size()) - 1)]});
        } else {
          ins.push_back(colours()[pick(rng, 0, 1)]);
        }
      }
      net.arcs.push_back({"A" + std::to_string(++arc_no), t.id, net.places[i].id, ins});
    }
    if (shape.guards && !vars.empty() && pick(rng, 0, 2) == 0) {
      const int last = static_cast<int>(vars.size()) - 1;
      t.guard = Expr::compare(pick(rng, 0, 1) ? CompareOp::Eq : CompareOp::Ne,
                              Expr::var(vars[pick(rng, 0, last)]),
                              Expr::var(vars[pick(rng, 0, last)]));
    }
    net.transitions.push_back(t);
  }
  return net;
}

namespace {

struct Oracle {
  const petri::PrTNet& net;
  std::map<PlainMarking, std::size_t> best;  // marking -> remaining depth when seen

  std::vector<const petri::Arc*> arcs_into(const std::string& t) const {
    std::vector<const petri::Arc*> out;
    for (const auto& a : net.arcs) {
      if (a.target == t) out.push_back(&a);
    }
    return out;
  }
  std::vector<const petri::Arc*> arcs_out_of(const std::string& t) const {
    std::vector<const petri::Arc*> out;
    for (const auto& a : net.arcs) {
      if (a.source == t) out.push_back(&a);
    }
    return out;
  }

  static Token instance(const petri::Inscription& ins, const Binding& b) {
    Token t;
    for (const auto& term : ins) {
      if (const auto* v = std::get_if<petri::Variable>(&term)) {
        t.push_back(b.at(v->name));
      } else {
        t.push_back(std::get<Atom>(term));
      }
    }
    return t;
  }

  static bool holds(const Expr& e, const Binding& b) {
    // Only the shapes random_net produces: var (=|<>) var.
    const Atom& l = b.at(e.args[0].name);
    const Atom& r = b.at(e.args[1].name);
    return e.op == CompareOp::Eq ? l == r : !(l == r);
  }

  std::optional<PlainMarking> try_fire(const PlainMarking& m, const petri::Transition& t,
                                       const Binding& b) const {
    PlainMarking next = m;
    for (const auto* a : arcs_into(t.id)) {
      auto& bag = next[a->source];
      auto it = bag.find(instance(a->inscription, b));
      if (it == bag.end()) return std::nullopt;
      bag.erase(it);
      if (bag.empty()) next.erase(a->source);
    }
    if (t.guard && !holds(*t.guard, b)) return std::nullopt;
    for (const auto* a : arcs_out_of(t.id)) next[a->target].insert(instance(a->inscription, b));
    for (const auto& p : net.places) {
      auto it = next.find(p.id);
      if (p.capacity && it != next.end() && it->second.size() > p.capacity) return std::nullopt;
    }
    return next;
  }

  void visit(const PlainMarking& m, std::size_t remaining) {
    auto [it, fresh] = best.emplace(m, remaining);
    if (!fresh) {
      if (it->second >= remaining) return;
      it->second = remaining;
    }
    if (remaining == 0) return;
    std::set<Atom> domain;
    for (const auto& [_, bag] : m) {
      for (const auto& tok : bag) domain.insert(tok.begin(), tok.end());
    }
    for (const auto& t : net.transitions) {
      std::set<std::string> vars;
      for (const auto* a : arcs_into(t.id)) {
        for (const auto& term : a->inscription) {
          if (const auto* v = std::get_if<petri::Variable>(&term)) vars.insert(v->name);
        }
      }
      std::vector<std::string> order(vars.begin(), vars.end());
      std::vector<Atom> values(domain.begin(), domain.end());
      std::function<void(std::size_t, Binding&)> each = [&](std::size_t k, Binding& b) {
        if (k == order.size()) {
          if (auto next = try_fire(m, t, b)) visit(*next, remaining - 1);
          return;
        }
        for (const auto& v : values) {
          b[order[k]] = v;
          each(k + 1, b);
        }
        b.erase(order[k]);
      };
      Binding b;
      each(0, b);
    }
  }
};

}  // namespace

std::set<PlainMarking> enumerate_states(const petri::PrTNet& net, std::size_t max_depth) {
  PlainMarking m0;
  for (const auto& [place, token] : net.init) m0[place].insert(token);
  Oracle o{net, {}};
  o.visit(m0, max_depth);
  std::set<PlainMarking> out;
  for (const auto& [m, _] : o.best) out.insert(m);
  return out;
}

}  // namespace atcg::test
