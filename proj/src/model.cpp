#include "atcg/model.hpp"

#include <algorithm>
#include <set>

namespace atcg::model {

const OperationDef* ClassDef::find_operation(const std::string& op) const {
  for (const auto& o : operations) {
    if (o.name == op) return &o;
  }
  return nullptr;
}

const ClassDef* ClassModel::find_class(const std::string& name) const {
  for (const auto& c : classes) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

bool ClassModel::associated(const std::string& a, const std::string& b) const {
  return std::any_of(associations.begin(), associations.end(), [&](const Association& x) {
    return (x.from == a && x.to == b) || (x.from == b && x.to == a);
  });
}

const Lifeline* SequenceModel::find_lifeline(const std::string& id) const {
  for (const auto& l : lifelines) {
    if (l.id == id) return &l;
  }
  return nullptr;
}

bool Operand::operator==(const Operand& o) const {
  return guard == o.guard && body == o.body;
}

bool CombinedFragment::operator==(const CombinedFragment& o) const {
  return id == o.id && op == o.op && operands == o.operands && loop_min == o.loop_min &&
         loop_max == o.loop_max;
}

const char* to_string(FragmentOperator op) noexcept {
  switch (op) {
    case FragmentOperator::Alt: return "alt";
    case FragmentOperator::Opt: return "opt";
    case FragmentOperator::Loop: return "loop";
    case FragmentOperator::Break: return "break";
    case FragmentOperator::Par: return "par";
  }
  return "?";
}

std::optional<FragmentOperator> parse_fragment_operator(const std::string& s) {
  for (auto op : {FragmentOperator::Alt, FragmentOperator::Opt, FragmentOperator::Loop,
                  FragmentOperator::Break, FragmentOperator::Par}) {
    if (s == to_string(op)) return op;
  }
  return std::nullopt;
}

namespace {

void collect_messages(const std::vector<SeqElement>& body, std::vector<const Message*>& out) {
  for (const auto& el : body) {
    if (const auto* m = el.message()) {
      out.push_back(m);
    } else {
      for (const auto& operand : el.fragment()->operands) collect_messages(operand.body, out);
    }
  }
}

template <typename Range, typename Key>
void check_unique(const Range& items, Key key, const std::string& code,
                  const std::string& where, ValidationReport& report) {
  std::set<std::string> seen;
  for (const auto& item : items) {
    const std::string& k = key(item);
    if (!seen.insert(k).second) {
      report.error(code, where, "duplicate name '" + k + "'");
    }
  }
}

class SequenceChecker {
 public:
  SequenceChecker(const ClassModel& cm, const SequenceModel& sm, ValidationReport& report)
      : cm_(cm), sm_(sm), report_(report) {
    // Operand guards can only read values that some message passes as an
    // argument; each such parameter becomes a data place in the net.
    for (const Message* m : messages_in_order(sm)) {
      const Lifeline* to = sm.find_lifeline(m->to);
      const ClassDef* c = to ? cm.find_class(to->class_name) : nullptr;
      const OperationDef* op = c ? c->find_operation(m->operation) : nullptr;
      if (!op) continue;
      for (const auto& p : op->params) passed_.insert(p.name);
    }
  }

  void check_body(const std::vector<SeqElement>& body) {
    for (const auto& el : body) {
      if (const auto* m = el.message()) {
        check_message(*m);
      } else {
        check_fragment(*el.fragment());
      }
    }
  }

 private:
  void check_message(const Message& m) {
    const std::string where = "message " + m.id;
    const Lifeline* from = sm_.find_lifeline(m.from);
    const Lifeline* to = sm_.find_lifeline(m.to);
    if (!from) report_.error("unknown-lifeline", where, "sender lifeline '" + m.from + "' not declared");
    if (!to) report_.error("unknown-lifeline", where, "receiver lifeline '" + m.to + "' not declared");
    if (!to) return;
    const ClassDef* receiver = cm_.find_class(to->class_name);
    if (!receiver) return;  // reported on the lifeline
    const OperationDef* op = receiver->find_operation(m.operation);
    if (!op) {
      report_.error("unknown-operation", where,
                    "class '" + receiver->name + "' has no operation '" + m.operation + "'");
      return;
    }
    if (op->params.size() != m.args.size()) {
      report_.error("arity-mismatch", where,
                    m.operation + " takes " + std::to_string(op->params.size()) +
                        " argument(s), message passes " + std::to_string(m.args.size()));
    }
    if (from && cm_.find_class(from->class_name) && from->class_name != to->class_name &&
        !cm_.associated(from->class_name, to->class_name)) {
      report_.warn("unassociated-message", where,
                   "classes '" + from->class_name + "' and '" + to->class_name +
                       "' share no association");
    }
  }

  void check_fragment(const CombinedFragment& f) {
    const std::string where = "fragment " + f.id;
    const std::size_t n = f.operands.size();
    switch (f.op) {
      case FragmentOperator::Opt:
      case FragmentOperator::Loop:
      case FragmentOperator::Break:
        if (n != 1) {
          report_.error("operand-count", where,
                        std::string(to_string(f.op)) + " needs exactly 1 operand, has " +
                            std::to_string(n));
        }
        break;
      case FragmentOperator::Alt:
      case FragmentOperator::Par:
        if (n < 2) {
          report_.error("operand-count", where,
                        std::string(to_string(f.op)) + " needs at least 2 operands, has " +
                            std::to_string(n));
        }
        break;
    }
    if (f.op == FragmentOperator::Alt) {
      auto unguarded = std::count_if(f.operands.begin(), f.operands.end(),
                                     [](const Operand& o) { return !o.guard; });
      if (unguarded > 1) {
        report_.error("multiple-else", where, "at most one operand may omit its guard");
      }
    }
    if (f.op != FragmentOperator::Loop && (f.loop_min || f.loop_max)) {
      report_.error("loop-bounds", where, "loop bounds on a non-loop fragment");
    }
    if ((f.loop_min && *f.loop_min < 0) || (f.loop_max && *f.loop_max < 0)) {
      report_.error("loop-bounds", where, "loop bounds must be non-negative");
    }
    if (f.loop_min && f.loop_max && *f.loop_min > *f.loop_max) {
      report_.error("loop-bounds", where, "loopMin exceeds loopMax");
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Operand& o = f.operands[i];
      const bool implicit_else = f.op == FragmentOperator::Alt && !o.guard;
      if (o.guard) {
        for (const auto& v : free_variables(*o.guard)) {
          if (!passed_.count(v)) {
            report_.error("unknown-guard-variable", where + " operand " + std::to_string(i + 1),
                          "guard reads '" + v + "', which no message passes as an argument");
          }
        }
      }
      if (o.body.empty() && !implicit_else) {
        report_.error("empty-operand", where + " operand " + std::to_string(i + 1),
                      "operand body is empty");
      }
      check_body(o.body);
    }
  }

  const ClassModel& cm_;
  const SequenceModel& sm_;
  ValidationReport& report_;
  std::set<std::string> passed_;
};

void check_element_ids(const std::vector<SeqElement>& body, std::set<std::string>& ids,
                       ValidationReport& report) {
  for (const auto& el : body) {
    const std::string& id = el.message() ? el.message()->id : el.fragment()->id;
    if (!ids.insert(id).second) {
      report.error("duplicate-id", "element " + id, "element id '" + id + "' used twice");
    }
    if (const auto* f = el.fragment()) {
      for (const auto& o : f->operands) check_element_ids(o.body, ids, report);
    }
  }
}

}  // namespace

std::vector<const Message*> messages_in_order(const SequenceModel& sm) {
  std::vector<const Message*> out;
  collect_messages(sm.body, out);
  return out;
}

ValidationReport validate_model(const ClassModel& cm, const SequenceModel& sm) {
  ValidationReport report;

  check_unique(cm.classes, [](const ClassDef& c) -> const std::string& { return c.name; },
               "duplicate-class", "classes", report);
  for (const auto& c : cm.classes) {
    const std::string where = "class " + c.name;
    check_unique(c.attributes, [](const TypedName& a) -> const std::string& { return a.name; },
                 "duplicate-attribute", where, report);
    check_unique(c.operations,
                 [](const OperationDef& o) -> const std::string& { return o.name; },
                 "duplicate-operation", where, report);
    for (const auto& op : c.operations) {
      const std::string op_where = where + " operation " + op.name;
      check_unique(op.params, [](const TypedName& p) -> const std::string& { return p.name; },
                   "duplicate-param", op_where, report);
      if (op.pre) {
        std::set<std::string> scope;
        for (const auto& p : op.params) scope.insert(p.name);
        for (const auto& a : c.attributes) scope.insert(a.name);
        for (const auto& v : free_variables(*op.pre)) {
          if (!scope.count(v)) {
            report.error("unknown-variable", op_where,
                         "precondition references '" + v + "', not a parameter or attribute");
          }
        }
      }
    }
  }
  for (const auto& a : cm.associations) {
    const std::string where = "association " + a.from + "->" + a.to;
    if (!cm.find_class(a.from)) report.error("unknown-class", where, "no class '" + a.from + "'");
    if (!cm.find_class(a.to)) report.error("unknown-class", where, "no class '" + a.to + "'");
    if (a.from == a.to && !a.label) {
      report.error("unlabeled-self-association", where, "self-association needs a label");
    }
  }

  check_unique(sm.lifelines, [](const Lifeline& l) -> const std::string& { return l.id; },
               "duplicate-lifeline", "sequence " + sm.name, report);
  for (const auto& l : sm.lifelines) {
    if (!cm.find_class(l.class_name)) {
      report.error("unknown-class", "lifeline " + l.id, "no class '" + l.class_name + "'");
    }
  }
  if (sm.body.empty()) {
    report.error("empty-body", "sequence " + sm.name, "sequence has no messages");
  }
  std::set<std::string> ids;
  check_element_ids(sm.body, ids, report);
  SequenceChecker(cm, sm, report).check_body(sm.body);
  return report;
}

}  // namespace atcg::model
