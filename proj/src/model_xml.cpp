#include <charconv>
#include <initializer_list>
#include <set>

#include "atcg/error.hpp"
#include "atcg/ingest.hpp"
#include "atcg/xml.hpp"

namespace atcg::ingest {
namespace {

using model::ClassDef;
using model::CombinedFragment;
using model::OperationDef;
using model::SeqElement;
using xml::Element;

std::string trim(std::string_view s) {
  auto is_ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
  return std::string(s);
}

class ModelReader {
 public:
  explicit ModelReader(std::string_view input) : input_(input) {}

  model::DesignModel read() {
    xml::Document doc = xml::parse(input_);
    const Element& root = doc.root;
    if (root.name != "model") fail(root, "unknown-element", "root element must be <model>");
    check_attributes(root, {"name"});
    model::DesignModel dm;
    dm.name = required(root, "name");
    no_text(root);

    const Element* classes = nullptr;
    const Element* associations = nullptr;
    const Element* sequence = nullptr;
    for (const auto& c : root.children) {
      const Element** slot = nullptr;
      if (c.name == "classes") slot = &classes;
      else if (c.name == "associations") slot = &associations;
      else if (c.name == "sequence") slot = &sequence;
      else fail(c, "unknown-element", "unexpected <" + c.name + "> in <model>");
      if (*slot) fail(c, "duplicate-element", "<" + c.name + "> appears twice");
      *slot = &c;
    }
    if (!classes) fail(root, "missing-classes", "<model> has no <classes> element");
    if (!sequence) fail(root, "missing-sequence", "<model> has no <sequence> element");

    read_classes(*classes, dm.classes);
    if (associations) read_associations(*associations, dm.classes);
    read_sequence(*sequence, dm.sequence);
    return dm;
  }

 private:
  [[noreturn]] void fail(const Element& at, const std::string& code, const std::string& what) const {
    throw Error(code, what + " at " + xml::describe_offset(input_, at.offset), at.offset);
  }

  void check_attributes(const Element& e, std::initializer_list<std::string_view> allowed) const {
    for (const auto& [k, v] : e.attributes) {
      bool ok = false;
      for (auto a : allowed) ok = ok || a == k;
      if (!ok) fail(e, "unknown-attribute", "unexpected attribute '" + k + "' on <" + e.name + ">");
    }
  }

  std::string required(const Element& e, std::string_view key) const {
    const std::string* v = e.attr(key);
    if (!v) {
      fail(e, "missing-attribute",
           "<" + e.name + "> needs attribute '" + std::string(key) + "'");
    }
    return *v;
  }

  void no_text(const Element& e) const {
    if (!trim(e.text).empty()) fail(e, "unexpected-text", "<" + e.name + "> must not contain text");
  }

  void expect_name(const Element& e, std::string_view name, std::string_view parent) const {
    if (e.name != name) {
      fail(e, "unknown-element",
           "unexpected <" + e.name + "> in <" + std::string(parent) + ">");
    }
  }

  void identifier(const Element& e, const std::string& value) const {
    if (!is_identifier(value)) fail(e, "bad-identifier", "'" + value + "' is not an identifier");
  }

  Expr expression(const Element& e, const std::string& text) const {
    try {
      return parse_expr(text);
    } catch (const Error& err) {
      fail(e, "bad-expr", std::string("in '") + text + "': " + err.what());
    }
  }

  std::optional<std::int64_t> integer_attr(const Element& e, std::string_view key) const {
    const std::string* v = e.attr(key);
    if (!v) return std::nullopt;
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc() || ptr != v->data() + v->size()) {
      fail(e, "bad-integer", "attribute '" + std::string(key) + "' is not an integer");
    }
    return out;
  }

  void read_classes(const Element& classes, model::ClassModel& cm) const {
    check_attributes(classes, {});
    no_text(classes);
    for (const auto& ce : classes.children) {
      expect_name(ce, "class", "classes");
      check_attributes(ce, {"name"});
      no_text(ce);
      ClassDef cls;
      cls.name = required(ce, "name");
      identifier(ce, cls.name);
      for (const auto& member : ce.children) {
        if (member.name == "attribute") {
          check_attributes(member, {"name", "type"});
          no_text(member);
          model::TypedName a{required(member, "name"), ""};
          identifier(member, a.name);
          if (const auto* t = member.attr("type")) a.type_name = *t;
          cls.attributes.push_back(std::move(a));
        } else if (member.name == "operation") {
          cls.operations.push_back(read_operation(member));
        } else {
          fail(member, "unknown-element", "unexpected <" + member.name + "> in <class>");
        }
      }
      cm.classes.push_back(std::move(cls));
    }
    if (cm.classes.empty()) fail(classes, "missing-class", "<classes> declares no class");
  }

  OperationDef read_operation(const Element& oe) const {
    check_attributes(oe, {"name"});
    no_text(oe);
    OperationDef op;
    op.name = required(oe, "name");
    identifier(oe, op.name);
    for (const auto& c : oe.children) {
      if (c.name == "param") {
        check_attributes(c, {"name", "type"});
        no_text(c);
        model::TypedName p{required(c, "name"), ""};
        identifier(c, p.name);
        if (const auto* t = c.attr("type")) p.type_name = *t;
        op.params.push_back(std::move(p));
      } else if (c.name == "pre" || c.name == "post") {
        check_attributes(c, {});
        if (!c.children.empty()) fail(c.children.front(), "unknown-element", "<" + c.name + "> holds text only");
        auto& slot = c.name == "pre" ? op.pre : op.post;
        if (slot) fail(c, "duplicate-element", "<" + c.name + "> appears twice");
        slot = expression(c, c.text);
      } else {
        fail(c, "unknown-element", "unexpected <" + c.name + "> in <operation>");
      }
    }
    return op;
  }

  void read_associations(const Element& ae, model::ClassModel& cm) const {
    check_attributes(ae, {});
    no_text(ae);
    for (const auto& a : ae.children) {
      expect_name(a, "association", "associations");
      check_attributes(a, {"from", "to", "label"});
      no_text(a);
      model::Association assoc{required(a, "from"), required(a, "to"), std::nullopt};
      if (const auto* l = a.attr("label")) assoc.label = *l;
      cm.associations.push_back(std::move(assoc));
    }
  }

  void read_sequence(const Element& se, model::SequenceModel& sm) {
    check_attributes(se, {"name"});
    no_text(se);
    sm.name = required(se, "name");
    std::size_t i = 0;
    for (; i < se.children.size() && se.children[i].name == "lifeline"; ++i) {
      const Element& le = se.children[i];
      check_attributes(le, {"id", "name", "class"});
      no_text(le);
      model::Lifeline l{required(le, "id"), required(le, "name"), required(le, "class")};
      identifier(le, l.id);
      claim_id(le, l.id);
      sm.lifelines.push_back(std::move(l));
    }
    if (sm.lifelines.empty()) fail(se, "missing-lifeline", "<sequence> declares no lifeline");
    for (; i < se.children.size(); ++i) {
      const Element& c = se.children[i];
      if (c.name == "lifeline") fail(c, "unknown-element", "<lifeline> must precede messages");
      sm.body.push_back(read_element(c, "sequence"));
    }
  }

  SeqElement read_element(const Element& e, std::string_view parent) {
    if (e.name == "message") {
      check_attributes(e, {"id", "from", "to", "operation"});
      no_text(e);
      model::Message m;
      m.id = required(e, "id");
      identifier(e, m.id);
      claim_id(e, m.id);
      m.from = required(e, "from");
      m.to = required(e, "to");
      m.operation = required(e, "operation");
      for (const auto& a : e.children) {
        expect_name(a, "arg", "message");
        check_attributes(a, {});
        if (!a.children.empty()) fail(a.children.front(), "unknown-element", "<arg> holds text only");
        try {
          m.args.push_back(parse_atom(a.text));
        } catch (const Error& err) {
          fail(a, "bad-atom", err.what());
        }
      }
      return SeqElement{std::move(m)};
    }
    if (e.name == "fragment") {
      check_attributes(e, {"id", "operator", "loopMin", "loopMax"});
      no_text(e);
      CombinedFragment f;
      f.id = required(e, "id");
      identifier(e, f.id);
      claim_id(e, f.id);
      auto op = model::parse_fragment_operator(required(e, "operator"));
      if (!op) fail(e, "bad-operator", "unknown fragment operator '" + *e.attr("operator") + "'");
      f.op = *op;
      f.loop_min = integer_attr(e, "loopMin");
      f.loop_max = integer_attr(e, "loopMax");
      for (const auto& oe : e.children) {
        expect_name(oe, "operand", "fragment");
        check_attributes(oe, {"guard"});
        no_text(oe);
        model::Operand operand;
        if (const auto* g = oe.attr("guard")) operand.guard = expression(oe, *g);
        for (const auto& inner : oe.children) operand.body.push_back(read_element(inner, "operand"));
        f.operands.push_back(std::move(operand));
      }
      if (f.operands.empty()) fail(e, "missing-operand", "<fragment> has no <operand>");
      return SeqElement{std::move(f)};
    }
    fail(e, "unknown-element", "unexpected <" + e.name + "> in <" + std::string(parent) + ">");
  }

  void claim_id(const Element& e, const std::string& id) {
    if (!ids_.insert(id).second) fail(e, "duplicate-id", "id '" + id + "' is declared twice");
  }

  std::string_view input_;
  std::set<std::string> ids_;
};

}  // namespace

model::DesignModel parse_model_xml(std::string_view input) { return ModelReader(input).read(); }

}  // namespace atcg::ingest
