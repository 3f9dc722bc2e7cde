#include "atcg/petri.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "atcg/ingest.hpp"

namespace atcg::petri {
namespace {

// Per-transition arc lists, resolved once per net.
class Engine {
 public:
  explicit Engine(const PrTNet& net) {
    for (const auto& t : net.transitions) order_.push_back(&t);
    std::sort(order_.begin(), order_.end(), [](const Transition* a, const Transition* b) {
      return natural_less(a->id, b->id);
    });
    for (const auto& a : net.arcs) {
      inputs_[a.target].push_back(&a);
      outputs_[a.source].push_back(&a);
    }
    for (const auto& p : net.places) {
      capacity_[p.id] = p.capacity;
      bounded_ = bounded_ || p.capacity > 0;
    }
  }

  std::vector<Firing> enabled(const Marking& m, bool respect_capacity = true) const {
    std::vector<Firing> out;
    for (const Transition* t : order_) {
      std::vector<Binding> found;
      auto it = inputs_.find(t->id);
      static const std::vector<const Arc*> kNone;
      const auto& ins = it == inputs_.end() ? kNone : it->second;
      std::map<std::pair<std::string, Token>, std::size_t> used;
      Binding binding;
      match(*t, ins, 0, m, binding, used, found);
      std::sort(found.begin(), found.end());
      found.erase(std::unique(found.begin(), found.end()), found.end());
      for (auto& b : found) {
        Firing f{t->id, std::move(b)};
        if (respect_capacity && bounded_ && !fits(m, f)) continue;
        out.push_back(std::move(f));
      }
    }
    return out;
  }

  Marking apply(const Marking& m, const Firing& f) const {
    Marking next = m;
    if (auto it = inputs_.find(f.transition); it != inputs_.end()) {
      for (const Arc* a : it->second) {
        if (!next.remove(a->source, instantiate(a->inscription, f.binding))) {
          throw Error("not-enabled", "transition " + f.transition + " lacks a token in " + a->source);
        }
      }
    }
    if (auto it = outputs_.find(f.transition); it != outputs_.end()) {
      for (const Arc* a : it->second) {
        next.add(a->target, instantiate(a->inscription, f.binding));
        auto cap = capacity_.find(a->target);
        if (cap != capacity_.end() && cap->second > 0 && next.count(a->target) > cap->second) {
          throw Error("capacity-exceeded", "firing " + f.transition + " overfills place " +
                                               a->target);
        }
      }
    }
    return next;
  }

 private:
  // A firing that would overfill a bounded place is not enabled.
  bool fits(const Marking& m, const Firing& f) const {
    try {
      apply(m, f);
      return true;
    } catch (const Error& e) {
      if (e.code() != "capacity-exceeded") throw;
      return false;
    }
  }

  static Token instantiate(const Inscription& ins, const Binding& b) {
    Token t;
    t.reserve(ins.size());
    for (const auto& term : ins) {
      if (const auto* v = std::get_if<Variable>(&term)) {
        auto it = b.find(v->name);
        if (it == b.end()) throw Error("unbound-variable", "variable '" + v->name + "' is unbound");
        t.push_back(it->second);
      } else {
        t.push_back(std::get<Atom>(term));
      }
    }
    return t;
  }

  static bool unify(const Inscription& ins, const Token& tok, Binding& b,
                    std::vector<std::string>& bound_here) {
    if (ins.size() != tok.size()) return false;
    for (std::size_t i = 0; i < ins.size(); ++i) {
      if (const auto* v = std::get_if<Variable>(&ins[i])) {
        auto it = b.find(v->name);
        if (it == b.end()) {
          b.emplace(v->name, tok[i]);
          bound_here.push_back(v->name);
        } else if (!(it->second == tok[i])) {
          return false;
        }
      } else if (!(std::get<Atom>(ins[i]) == tok[i])) {
        return false;
      }
    }
    return true;
  }

  void match(const Transition& t, const std::vector<const Arc*>& ins, std::size_t i,
             const Marking& m, Binding& b,
             std::map<std::pair<std::string, Token>, std::size_t>& used,
             std::vector<Binding>& found) const {
    if (i == ins.size()) {
      if (t.guard) {
        try {
          if (!ingest::eval_expr(*t.guard, b)) return;
        } catch (const Error& e) {
          if (e.code() != "type-mismatch") throw;
          return;
        }
      }
      found.push_back(b);
      return;
    }
    const Arc& arc = *ins[i];
    const auto* toks = m.tokens(arc.source);
    if (!toks) return;
    for (auto it = toks->begin(); it != toks->end(); it = toks->upper_bound(*it)) {
      auto key = std::make_pair(arc.source, *it);
      std::size_t& taken = used[key];
      if (taken >= toks->count(*it)) continue;
      std::vector<std::string> bound_here;
      if (unify(arc.inscription, *it, b, bound_here)) {
        ++taken;
        match(t, ins, i + 1, m, b, used, found);
        --taken;
      }
      for (const auto& v : bound_here) b.erase(v);
    }
  }

  std::vector<const Transition*> order_;
  std::unordered_map<std::string, std::vector<const Arc*>> inputs_;
  std::unordered_map<std::string, std::vector<const Arc*>> outputs_;
  std::unordered_map<std::string, std::uint32_t> capacity_;
  bool bounded_ = false;
};

template <typename T>
void check_unique_ids(const std::vector<T>& items, const char* kind,
                      std::unordered_set<std::string>& all, ValidationReport& report) {
  std::unordered_set<std::string> seen;
  for (const auto& item : items) {
    if (!seen.insert(item.id).second) {
      report.error("duplicate-id", std::string(kind) + " " + item.id, "id declared twice");
    } else if (!all.insert(item.id).second) {
      report.error("duplicate-id", std::string(kind) + " " + item.id,
                   "id shared with an element of another kind");
    }
  }
}

}  // namespace

ValidationReport compile_net(const PrTNet& net) {
  ValidationReport report;
  std::unordered_set<std::string> all;
  check_unique_ids(net.places, "place", all, report);
  check_unique_ids(net.transitions, "transition", all, report);
  check_unique_ids(net.arcs, "arc", all, report);

  std::map<std::string, std::set<std::string>> input_vars;
  for (const auto& a : net.arcs) {
    const std::string where = "arc " + a.id;
    const bool src_place = net.find_place(a.source) != nullptr;
    const bool src_trans = net.find_transition(a.source) != nullptr;
    const bool dst_place = net.find_place(a.target) != nullptr;
    const bool dst_trans = net.find_transition(a.target) != nullptr;
    if (!src_place && !src_trans) {
      report.error("dangling-arc", where, "source '" + a.source + "' does not exist");
      continue;
    }
    if (!dst_place && !dst_trans) {
      report.error("dangling-arc", where, "target '" + a.target + "' does not exist");
      continue;
    }
    if (src_place == dst_place) {
      report.error("nonbipartite-arc", where,
                   "arc must connect a place and a transition: " + a.source + " -> " + a.target);
      continue;
    }
    if (dst_trans) {
      auto vars = inscription_variables(a.inscription);
      input_vars[a.target].insert(vars.begin(), vars.end());
    }
  }
  for (const auto& a : net.arcs) {
    if (!net.find_transition(a.source) || !net.find_place(a.target)) continue;
    const auto& bound = input_vars[a.source];
    for (const auto& v : inscription_variables(a.inscription)) {
      if (!bound.count(v)) {
        report.error("unbound-output-variable", "arc " + a.id,
                     "variable '" + v + "' is not bound by an input arc of " + a.source);
      }
    }
  }
  for (const auto& t : net.transitions) {
    if (!t.guard) continue;
    const auto& bound = input_vars[t.id];
    for (const auto& v : free_variables(*t.guard)) {
      if (!bound.count(v)) {
        report.error("unbound-guard-variable", "transition " + t.id,
                     "guard variable '" + v + "' is not inscribed on an input arc");
      }
    }
  }
  std::map<std::string, std::size_t> init_counts;
  for (const auto& [place, token] : net.init) {
    if (!net.find_place(place)) {
      report.error("dangling-init-place", "init " + place, "initial token on unknown place");
      continue;
    }
    ++init_counts[place];
  }
  for (const auto& [place, n] : init_counts) {
    const Place* p = net.find_place(place);
    if (p->capacity > 0 && n > p->capacity) {
      report.error("capacity-violation", "place " + place,
                   std::to_string(n) + " initial tokens exceed capacity " +
                       std::to_string(p->capacity));
    }
  }
  return report;
}

std::vector<Firing> enabled(const PrTNet& net, const Marking& m) { return Engine(net).enabled(m); }

Marking fire(const PrTNet& net, const Marking& m, const Firing& f) {
  Engine engine(net);
  // Capacity is left to apply() so an overfilling firing reports as such.
  auto en = engine.enabled(m, false);
  if (std::find(en.begin(), en.end(), f) == en.end()) {
    throw Error("not-enabled", "transition " + f.transition + " is not enabled under " +
                                   binding_to_string(f.binding));
  }
  return engine.apply(m, f);
}

ReachGraph reach_graph(const PrTNet& net, const Bounds& bounds) {
  Engine engine(net);
  ReachGraph g;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::size_t> depth;
  Marking m0 = initial_marking(net);
  index.emplace(canonical(m0), 0);
  g.states.push_back(std::move(m0));
  depth.push_back(0);
  for (std::size_t s = 0; s < g.states.size(); ++s) {
    auto en = engine.enabled(g.states[s]);
    if (depth[s] >= bounds.max_depth) {
      if (!en.empty()) g.truncated = true;
      continue;
    }
    for (auto& f : en) {
      Marking next = engine.apply(g.states[s], f);
      std::string key = canonical(next);
      auto it = index.find(key);
      std::size_t to;
      if (it != index.end()) {
        to = it->second;
      } else {
        if (g.states.size() >= bounds.max_states) {
          g.truncated = true;
          continue;
        }
        to = g.states.size();
        index.emplace(std::move(key), to);
        g.states.push_back(std::move(next));
        depth.push_back(depth[s] + 1);
      }
      g.edges.push_back({s, std::move(f.transition), std::move(f.binding), to});
    }
  }
  return g;
}

const char* to_string(LeafKind k) noexcept {
  switch (k) {
    case LeafKind::Inner: return "inner";
    case LeafKind::RoundTrip: return "round-trip";
    case LeafKind::Dead: return "dead";
    case LeafKind::DepthBound: return "depth-bound";
  }
  return "?";
}

std::vector<std::size_t> TestTree::path_to(std::size_t v) const {
  std::vector<std::size_t> path;
  while (v != 0) {
    path.push_back(v);
    v = vertices[v].parent;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const PrTNet& net, const Bounds& bounds) : engine_(net), bounds_(bounds) {}

  TestTree build(const PrTNet& net) {
    TreeVertex root;
    root.marking = initial_marking(net);
    tree_.vertices.push_back(std::move(root));
    std::unordered_set<std::string> on_path{canonical(tree_.vertices[0].marking)};
    expand(0, on_path);
    label_states();
    return std::move(tree_);
  }

 private:
  void expand(std::size_t v, std::unordered_set<std::string>& on_path) {
    auto en = engine_.enabled(tree_.vertices[v].marking);
    if (en.empty()) {
      tree_.vertices[v].kind = LeafKind::Dead;
      return;
    }
    if (tree_.vertices[v].depth >= bounds_.max_depth) {
      tree_.vertices[v].kind = LeafKind::DepthBound;
      tree_.truncated = true;
      return;
    }
    for (auto& f : en) {
      if (tree_.vertices.size() >= bounds_.max_states) {
        tree_.truncated = true;
        return;
      }
      TreeVertex child;
      child.marking = engine_.apply(tree_.vertices[v].marking, f);
      child.firing = std::move(f);
      child.parent = v;
      child.depth = tree_.vertices[v].depth + 1;
      std::string key = canonical(child.marking);
      const bool repeats = on_path.count(key) > 0;
      if (repeats) child.kind = LeafKind::RoundTrip;
      const std::size_t c = tree_.vertices.size();
      tree_.vertices.push_back(std::move(child));
      tree_.vertices[v].children.push_back(c);
      if (!repeats) {
        on_path.insert(key);
        expand(c, on_path);
        on_path.erase(key);
      }
    }
  }

  void label_states() {
    std::unordered_map<std::string, std::size_t> index;
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop_front();
      auto& vertex = tree_.vertices[v];
      auto [it, inserted] = index.emplace(canonical(vertex.marking), tree_.states.size());
      if (inserted) tree_.states.push_back(vertex.marking);
      vertex.state = it->second;
      for (std::size_t c : vertex.children) queue.push_back(c);
    }
  }

  Engine engine_;
  const Bounds& bounds_;
  TestTree tree_;
};

}  // namespace

TestTree test_tree(const PrTNet& net, const Bounds& bounds) {
  return TreeBuilder(net, bounds).build(net);
}

}  // namespace atcg::petri
