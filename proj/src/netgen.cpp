#include "atcg/netgen.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "atcg/error.hpp"

namespace atcg::netgen {

using model::FragmentOperator;
using model::SeqElement;

const char* to_string(Relation r) noexcept {
  switch (r) {
    case Relation::Sequence: return "sequence";
    case Relation::FragmentEntry: return "fragment-entry";
    case Relation::FragmentExit: return "fragment-exit";
  }
  return "?";
}

const NrtRow* NRT::row(const std::string& node) const {
  for (const auto& r : rows) {
    if (r.node == node) return &r;
  }
  return nullptr;
}

bool NRT::has_link(const std::string& from, const std::string& to, Relation rel) const {
  const NrtRow* r = row(from);
  if (!r) return false;
  return std::find(r->successors.begin(), r->successors.end(), Link{to, rel}) !=
         r->successors.end();
}

std::vector<Node> build_nodes(const model::SequenceModel& sm, const model::ClassModel& cm) {
  std::vector<Node> nodes;
  std::size_t k = 0;
  for (const model::Message* m : model::messages_in_order(sm)) {
    ++k;
    const std::string n = std::to_string(k);
    Node node;
    node.id = "N" + n;
    node.message_ref = m->id;
    node.operation = m->operation;
    node.in_place = "P" + std::to_string(2 * k - 1);
    node.out_place = "P" + std::to_string(2 * k);
    node.transition = "T" + n;
    node.in_arc = "A" + std::to_string(2 * k - 1);
    node.out_arc = "A" + std::to_string(2 * k);
    const model::Lifeline* receiver = sm.find_lifeline(m->to);
    const model::ClassDef* cls = receiver ? cm.find_class(receiver->class_name) : nullptr;
    const model::OperationDef* op = cls ? cls->find_operation(m->operation) : nullptr;
    if (!op || op->params.size() != m->args.size()) {
      throw Error("invalid-model", "message " + m->id + " does not match a declared operation");
    }
    for (std::size_t i = 0; i < op->params.size(); ++i) {
      node.params.push_back(op->params[i].name);
      node.tokens.push_back({op->params[i].name, Token{m->args[i]}});
    }
    // Attributes have no place in the net, so a precondition that reads one
    // cannot become a guard.
    if (op->pre) {
      bool params_only = true;
      for (const auto& v : free_variables(*op->pre)) {
        params_only = params_only && std::find(node.params.begin(), node.params.end(), v) !=
                                         node.params.end();
      }
      if (params_only) node.guard = op->pre;
    }
    if (op->post) node.post = print_expr(*op->post);
    nodes.push_back(std::move(node));
  }
  return nodes;
}

namespace {

struct Span {
  std::vector<std::string> first;
  std::vector<std::string> last;
  bool is_message = false;
};

class NrtBuilder {
 public:
  NrtBuilder(const std::vector<Node>& nodes) {
    for (const auto& n : nodes) {
      by_message_[n.message_ref] = n.id;
      nrt_.rows.push_back({n.id, {}, {}});
      row_index_[n.id] = nrt_.rows.size() - 1;
    }
  }

  Span body(const std::vector<SeqElement>& elements) {
    std::vector<Span> spans;
    for (const auto& el : elements) {
      Span s = element(el);
      if (s.first.empty()) continue;  // empty operand contributes no node
      spans.push_back(std::move(s));
    }
    for (std::size_t i = 1; i < spans.size(); ++i) {
      const Span& prev = spans[i - 1];
      const Span& cur = spans[i];
      Relation rel = Relation::FragmentExit;
      if (prev.is_message) rel = cur.is_message ? Relation::Sequence : Relation::FragmentEntry;
      for (const auto& a : prev.last) {
        for (const auto& b : cur.first) link(a, b, rel);
      }
    }
    Span out;
    if (!spans.empty()) {
      out.first = spans.front().first;
      out.last = spans.back().last;
      out.is_message = spans.size() == 1 && spans.front().is_message;
    }
    return out;
  }

  NRT finish() { return std::move(nrt_); }

 private:
  Span element(const SeqElement& el) {
    if (const auto* m = el.message()) {
      const std::string& id = by_message_.at(m->id);
      return {{id}, {id}, true};
    }
    Span s;
    for (const auto& operand : el.fragment()->operands) {
      Span inner = body(operand.body);
      s.first.insert(s.first.end(), inner.first.begin(), inner.first.end());
      s.last.insert(s.last.end(), inner.last.begin(), inner.last.end());
    }
    return s;
  }

  void link(const std::string& a, const std::string& b, Relation rel) {
    nrt_.rows[row_index_.at(a)].successors.push_back({b, rel});
    nrt_.rows[row_index_.at(b)].predecessors.push_back({a, rel});
  }

  std::map<std::string, std::string> by_message_;
  std::map<std::string, std::size_t> row_index_;
  NRT nrt_;
};

}  // namespace

NRT build_nrt(const std::vector<Node>& nodes, const model::ClassModel& cm,
              const model::SequenceModel& sm) {
  NrtBuilder builder(nodes);
  builder.body(sm.body);
  NRT nrt = builder.finish();

  // Association edges: control passes from a to b, and the class receiving a
  // is the class sending b or is associated with it.
  std::map<std::string, const model::Message*> message_of;
  for (const auto* m : model::messages_in_order(sm)) message_of[m->id] = m;
  std::map<std::string, const Node*> node_of;
  for (const auto& n : nodes) node_of[n.id] = &n;
  auto class_of = [&](const std::string& lifeline) -> std::string {
    const auto* l = sm.find_lifeline(lifeline);
    return l ? l->class_name : std::string();
  };
  for (const auto& row : nrt.rows) {
    const model::Message* a = message_of.at(node_of.at(row.node)->message_ref);
    for (const auto& succ : row.successors) {
      const model::Message* b = message_of.at(node_of.at(succ.node)->message_ref);
      const std::string receiver = class_of(a->to);
      const std::string sender = class_of(b->from);
      if (receiver == sender || cm.associated(receiver, sender)) {
        std::pair<std::string, std::string> edge{row.node, succ.node};
        if (std::find(nrt.association_edges.begin(), nrt.association_edges.end(), edge) ==
            nrt.association_edges.end()) {
          nrt.association_edges.push_back(std::move(edge));
        }
      }
    }
  }
  return nrt;
}

namespace {

void cfn_body(const std::vector<SeqElement>& body, const std::map<std::string, std::string>& node_of,
              std::vector<CfVertex>& out) {
  for (const auto& el : body) {
    CfVertex v;
    if (const auto* m = el.message()) {
      v.kind = CfKind::Leaf;
      v.node = node_of.at(m->id);
    } else {
      const auto& f = *el.fragment();
      v.kind = CfKind::Fragment;
      v.fragment_id = f.id;
      v.op = f.op;
      v.loop_min = f.loop_min;
      v.loop_max = f.loop_max;
      for (const auto& operand : f.operands) {
        CfVertex o;
        o.kind = CfKind::Operand;
        o.fragment_id = f.id;
        o.op = f.op;
        o.guard = operand.guard;
        cfn_body(operand.body, node_of, o.children);
        v.children.push_back(std::move(o));
      }
    }
    out.push_back(std::move(v));
  }
}

}  // namespace

CfVertex build_cfn(const model::SequenceModel& sm, const std::vector<Node>& nodes, const NRT& nrt) {
  std::map<std::string, std::string> node_of;
  for (const auto& n : nodes) {
    if (!nrt.row(n.id)) throw Error("inconsistent-input", "node " + n.id + " missing from the NRT");
    node_of[n.message_ref] = n.id;
  }
  CfVertex root;
  root.kind = CfKind::Seq;
  cfn_body(sm.body, node_of, root.children);
  return root;
}

namespace {

constexpr int kColumn = 195;
constexpr int kFirstColumn = 30;

class Assembler {
 public:
  Assembler(const std::vector<Node>& nodes, const NRT& nrt, const Options& options)
      : nrt_(nrt), options_(options) {
    for (const auto& n : nodes) {
      node_of_[n.id] = &n;
      for (const auto& [place, token] : n.tokens) {
        if (std::find(data_places_.begin(), data_places_.end(), place) == data_places_.end()) {
          data_places_.push_back(place);
        }
        std::pair<std::string, Token> seed{place, token};
        if (std::find(init_.begin(), init_.end(), seed) == init_.end()) init_.push_back(seed);
      }
    }
    message_transitions_ = nodes.size();
  }

  petri::PrTNet run(const CfVertex& root, const std::string& model_name) {
    const int entry = new_control();
    const int exit = seq(root.children, entry, std::nullopt);
    if (final_) fuse(exit, *final_);
    return emit(model_name, entry);
  }

 private:
  struct PendingArc {
    bool from_place = true;
    int control = -1;          // control place handle, or -1
    std::string named_place;   // data or budget place id
    std::size_t transition = 0;
    petri::Inscription inscription;
  };

  int new_control() {
    parent_.push_back(static_cast<int>(parent_.size()));
    return parent_.back();
  }

  int find(int h) {
    while (parent_[h] != h) h = parent_[h] = parent_[parent_[h]];
    return h;
  }

  void fuse(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

  std::size_t add_transition(petri::Transition t) {
    transitions_.push_back(std::move(t));
    return transitions_.size() - 1;
  }

  void control_arc(int place, std::size_t t, bool into_transition) {
    arcs_.push_back({into_transition, place, {}, t, {}});
  }

  void read_arc_pair(const std::string& place, const std::string& var, std::size_t t) {
    petri::Inscription ins{petri::Variable{var}};
    arcs_.push_back({true, -1, place, t, ins});
    arcs_.push_back({false, -1, place, t, ins});
  }

  bool is_data_place(const std::string& v) const {
    return std::find(data_places_.begin(), data_places_.end(), v) != data_places_.end();
  }

  // Silent transition between control places; guard variables are read
  // from the data places of the same name.
  std::size_t tau(const std::string& fragment, std::vector<int> from, std::vector<int> to,
                  std::optional<Expr> guard) {
    petri::Transition t;
    t.id = "T" + std::to_string(message_transitions_ + ++silent_count_);
    t.name = "tau_" + fragment + "_" + std::to_string(++tau_index_[fragment]);
    t.silent = true;
    t.guard = std::move(guard);
    std::size_t ti = add_transition(std::move(t));
    for (int p : from) control_arc(p, ti, true);
    if (transitions_[ti].guard) {
      for (const auto& v : free_variables(*transitions_[ti].guard)) {
        if (!is_data_place(v)) {
          throw Error("unbound-guard-variable",
                      "guard of " + transitions_[ti].name + " reads '" + v +
                          "', which no data place supplies");
        }
        read_arc_pair(v, v, ti);
      }
    }
    for (int p : to) control_arc(p, ti, false);
    return ti;
  }

  int leaf(const Node& n, int entry, std::optional<Expr> extra_guard) {
    petri::Transition t;
    t.id = n.transition;
    t.name = n.operation;
    if (extra_guard && n.guard) t.guard = Expr::conj(std::move(*extra_guard), *n.guard);
    else if (extra_guard) t.guard = std::move(extra_guard);
    else t.guard = n.guard;
    t.annotation = n.post;
    if (t.guard) {
      for (const auto& v : free_variables(*t.guard)) {
        if (std::find(n.params.begin(), n.params.end(), v) == n.params.end()) {
          throw Error("unbound-guard-variable", "guard of " + n.transition + " (" + n.operation +
                                                    ") reads '" + v +
                                                    "', which is not one of its parameters");
        }
      }
    }
    std::size_t ti = add_transition(std::move(t));
    const int exit = new_control();
    control_arc(entry, ti, true);
    for (const auto& [place, token] : n.tokens) {
      arcs_.push_back({true, -1, place, ti, {petri::Variable{place}}});
    }
    control_arc(exit, ti, false);
    for (const auto& [place, token] : n.tokens) {
      arcs_.push_back({false, -1, place, ti, {petri::Variable{place}}});
    }
    return exit;
  }

  int seq(const std::vector<CfVertex>& children, int entry, std::optional<Expr> first_guard) {
    int cur = entry;
    const CfVertex* prev = nullptr;
    for (const auto& c : children) {
      if (c.kind == CfKind::Leaf) {
        if (prev && prev->kind == CfKind::Leaf &&
            !nrt_.has_link(prev->node, c.node, Relation::Sequence)) {
          throw Error("inconsistent-input",
                      "NRT lacks the sequence link " + prev->node + " -> " + c.node);
        }
        cur = leaf(*node_of_.at(c.node), cur, std::move(first_guard));
      } else {
        if (first_guard) {
          cur = guarded_tau(c.fragment_id, cur, std::move(first_guard));
        }
        cur = fragment(c, cur);
      }
      first_guard.reset();
      prev = &c;
    }
    return cur;
  }

  int guarded_tau(const std::string& fragment, int entry, std::optional<Expr> guard) {
    const int next = new_control();
    tau(fragment, {entry}, {next}, std::move(guard));
    return next;
  }

  // Runs an operand body from `entry`; the guard lands on the first
  // transition when that transition can bind it, otherwise on a silent
  // transition in front of the body.
  int guarded_body(const CfVertex& operand, int entry, std::optional<Expr> guard) {
    if (guard) {
      bool fits = false;
      if (!operand.children.empty() && operand.children.front().kind == CfKind::Leaf) {
        const Node& first = *node_of_.at(operand.children.front().node);
        fits = true;
        for (const auto& v : free_variables(*guard)) {
          fits = fits && std::find(first.params.begin(), first.params.end(), v) != first.params.end();
        }
      }
      if (!fits) {
        entry = guarded_tau(operand.fragment_id, entry, std::move(guard));
        guard.reset();
      }
    }
    return seq(operand.children, entry, std::move(guard));
  }

  static std::optional<Expr> negation_of(const std::vector<const Expr*>& guards) {
    if (guards.empty()) return std::nullopt;
    Expr any = *guards.front();
    for (std::size_t i = 1; i < guards.size(); ++i) any = Expr::disj(std::move(any), *guards[i]);
    return Expr::negate(std::move(any));
  }

  int fragment(const CfVertex& f, int entry) {
    switch (f.op) {
      case FragmentOperator::Alt: {
        const int exit = new_control();
        std::vector<const Expr*> guards;
        for (const auto& o : f.children) {
          if (o.guard) guards.push_back(&*o.guard);
        }
        for (const auto& o : f.children) {
          std::optional<Expr> g = o.guard ? o.guard : negation_of(guards);
          if (o.children.empty()) {
            tau(f.fragment_id, {entry}, {exit}, std::move(g));
          } else {
            fuse(guarded_body(o, entry, std::move(g)), exit);
          }
        }
        return exit;
      }
      case FragmentOperator::Opt: {
        const CfVertex& o = f.children.front();
        const int exit = new_control();
        fuse(guarded_body(o, entry, o.guard), exit);
        std::optional<Expr> skip;
        if (o.guard) skip = Expr::negate(*o.guard);
        tau(f.fragment_id, {entry}, {exit}, std::move(skip));
        return exit;
      }
      case FragmentOperator::Loop: {
        const CfVertex& o = f.children.front();
        const int body_exit = guarded_body(o, entry, std::nullopt);
        const int exit = new_control();
        std::size_t back = tau(f.fragment_id, {body_exit}, {entry}, o.guard);
        std::optional<std::size_t> budget = options_.loop_unroll;
        if (!budget && f.loop_max) {
          budget = static_cast<std::size_t>(std::max<std::int64_t>(*f.loop_max - 1, 0));
        }
        if (budget) {
          const std::string place = "budget_" + f.fragment_id;
          budget_places_.push_back(place);
          for (std::size_t i = 0; i < *budget; ++i) init_.push_back({place, Token{}});
          arcs_.push_back({true, -1, place, back, {}});
        }
        std::optional<Expr> leave;
        if (o.guard) leave = Expr::negate(*o.guard);
        tau(f.fragment_id, {body_exit}, {exit}, std::move(leave));
        return exit;
      }
      case FragmentOperator::Par: {
        std::vector<int> entries, exits;
        for (std::size_t i = 0; i < f.children.size(); ++i) entries.push_back(new_control());
        tau(f.fragment_id, {entry}, entries, std::nullopt);
        for (std::size_t i = 0; i < f.children.size(); ++i) {
          exits.push_back(guarded_body(f.children[i], entries[i], f.children[i].guard));
        }
        const int exit = new_control();
        tau(f.fragment_id, exits, {exit}, std::nullopt);
        return exit;
      }
      case FragmentOperator::Break: {
        const CfVertex& o = f.children.front();
        if (!final_) final_ = new_control();
        fuse(guarded_body(o, entry, o.guard), *final_);
        const int exit = new_control();
        std::optional<Expr> skip;
        if (o.guard) skip = Expr::negate(*o.guard);
        tau(f.fragment_id, {entry}, {exit}, std::move(skip));
        return exit;
      }
    }
    throw Error("internal", "unknown fragment operator");
  }

  petri::PrTNet emit(const std::string& model_name, int entry) {
    petri::PrTNet net;
    net.id = model_name;

    // Number fused control places by their earliest member.
    std::map<int, std::string> control_id;
    std::vector<int> reps;
    for (int h = 0; h < static_cast<int>(parent_.size()); ++h) {
      if (find(h) == h) reps.push_back(h);
    }
    for (std::size_t i = 0; i < reps.size(); ++i) {
      const std::string id = "P" + std::to_string(i + 1);
      control_id[reps[i]] = id;
      net.places.push_back({id, id, 0, {kFirstColumn + kColumn * static_cast<int>(i), 105}});
    }
    for (std::size_t i = 0; i < data_places_.size(); ++i) {
      net.places.push_back({data_places_[i], data_places_[i], 0,
                            {kFirstColumn + kColumn * static_cast<int>(i), 300}});
    }
    for (std::size_t i = 0; i < budget_places_.size(); ++i) {
      net.places.push_back({budget_places_[i], budget_places_[i], 0,
                            {kFirstColumn + kColumn * static_cast<int>(i), 400}});
    }

    std::vector<std::size_t> order(transitions_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return petri::natural_less(transitions_[a].id, transitions_[b].id);
    });
    for (std::size_t i = 0; i < order.size(); ++i) {
      auto& t = transitions_[order[i]];
      t.position = {kFirstColumn + kColumn / 2 + kColumn * static_cast<int>(i), t.silent ? 190 : 105};
    }
    net.transitions = transitions_;

    std::size_t arc_no = 0;
    for (const auto& a : arcs_) {
      const std::string place = a.control >= 0 ? control_id.at(find(a.control)) : a.named_place;
      const std::string& tid = transitions_[a.transition].id;
      petri::Arc arc;
      arc.id = "A" + std::to_string(++arc_no);
      arc.source = a.from_place ? place : tid;
      arc.target = a.from_place ? tid : place;
      arc.inscription = a.inscription;
      net.arcs.push_back(std::move(arc));
    }

    net.init.push_back({control_id.at(find(entry)), Token{}});
    for (const auto& seed : init_) net.init.push_back(seed);
    return net;
  }

  const NRT& nrt_;
  const Options& options_;
  std::map<std::string, const Node*> node_of_;
  std::vector<std::string> data_places_;
  std::vector<std::string> budget_places_;
  std::vector<std::pair<std::string, Token>> init_;
  std::size_t message_transitions_ = 0;
  std::size_t silent_count_ = 0;
  std::map<std::string, std::size_t> tau_index_;
  std::vector<int> parent_;
  std::optional<int> final_;
  std::vector<petri::Transition> transitions_;
  std::vector<PendingArc> arcs_;
};

}  // namespace

petri::PrTNet assemble_net(const std::vector<Node>& nodes, const NRT& nrt, const CfVertex& tree,
                           const std::string& model_name, const Options& options) {
  return Assembler(nodes, nrt, options).run(tree, model_name);
}

petri::PrTNet generate(const model::DesignModel& dm, const Options& options) {
  ValidationReport report = model::validate_model(dm.classes, dm.sequence);
  if (!report.ok()) throw Error("invalid-model", report.to_string());
  auto nodes = build_nodes(dm.sequence, dm.classes);
  auto nrt = build_nrt(nodes, dm.classes, dm.sequence);
  auto tree = build_cfn(dm.sequence, nodes, nrt);
  return assemble_net(nodes, nrt, tree, dm.name, options);
}

}  // namespace atcg::netgen
