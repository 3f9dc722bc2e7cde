#include "atcg/pnml.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "atcg/error.hpp"
#include "atcg/ingest.hpp"
#include "atcg/xml.hpp"

namespace atcg::pnml {

using petri::PrTNet;

namespace {

std::string position_text(int v) { return std::to_string(v) + ".0"; }

std::string tuple_text(const Token& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ',';
    out += t[i].to_string();
  }
  out += ')';
  return out;
}

template <typename T>
std::vector<const T*> by_id(const std::vector<T>& items) {
  std::vector<const T*> out;
  for (const auto& i : items) out.push_back(&i);
  std::stable_sort(out.begin(), out.end(),
                   [](const T* a, const T* b) { return petri::natural_less(a->id, b->id); });
  return out;
}

// Cursor over tuple syntax shared by marking values and the INIT line.
class TupleScanner {
 public:
  TupleScanner(std::string_view s, std::string code) : s_(s), code_(std::move(code)) {}

  bool done() const { return pos_ >= s_.size(); }
  bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }
  bool starts_with(std::string_view w) const { return s_.substr(pos_, w.size()) == w; }
  void skip(std::size_t n) { pos_ += n; }

  void skip_spaces() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' ||
                                s_[pos_] == '\r')) {
      ++pos_;
    }
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != '(' && s_[pos_] != ',' && s_[pos_] != ' ') ++pos_;
    std::string id(s_.substr(start, pos_ - start));
    if (id.empty()) fail("expected a place id");
    return id;
  }

  // `(a1,a2)`; an atom may be a quoted text containing commas or parens.
  Token tuple() {
    expect('(');
    Token t;
    skip_spaces();
    if (peek(')')) {
      ++pos_;
      return t;
    }
    for (;;) {
      skip_spaces();
      std::size_t start = pos_;
      if (peek('"')) {
        ++pos_;
        while (pos_ < s_.size() && s_[pos_] != '"') pos_ += s_[pos_] == '\\' ? 2 : 1;
        if (pos_ >= s_.size()) fail("unterminated text atom");
        ++pos_;
      } else {
        while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ')') ++pos_;
      }
      try {
        t.push_back(parse_atom(s_.substr(start, pos_ - start)));
      } catch (const Error& e) {
        fail(e.what());
      }
      skip_spaces();
      if (peek(')')) {
        ++pos_;
        return t;
      }
      expect(',');
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(code_, what + " in '" + std::string(s_) + "' at " + std::to_string(pos_), pos_);
  }

 private:
  std::string_view s_;
  std::string code_;
  std::size_t pos_ = 0;
};

std::string init_line(const PrTNet& net) {
  std::vector<std::pair<std::string, Token>> data;
  for (const auto& entry : net.init) {
    if (!entry.second.empty()) data.push_back(entry);
  }
  std::stable_sort(data.begin(), data.end(), [](const auto& a, const auto& b) {
    return petri::natural_less(a.first, b.first);
  });
  if (data.empty()) return {};
  std::string line = "INIT ";
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (i) line += ", ";
    line += data[i].first + tuple_text(data[i].second);
  }
  return line;
}

void value_block(std::ostringstream& out, const char* tag, const std::string& value) {
  out << "      <" << tag << ">\n"
      << "        <value>" << xml::escape_text(value) << "</value>\n"
      << "      </" << tag << ">\n";
}

}  // namespace

std::string format_marking_value(const std::vector<Token>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    out += t.empty() ? "Default" : tuple_text(t);
    out += ',';
  }
  return out;
}

std::vector<Token> parse_marking_value(std::string_view text) {
  TupleScanner scan(text, "bad-marking");
  std::vector<Token> tokens;
  scan.skip_spaces();
  while (!scan.done()) {
    if (scan.starts_with("Default")) {
      scan.skip(7);
      tokens.push_back({});
    } else if (scan.peek('(')) {
      Token t = scan.tuple();
      if (t.empty()) scan.fail("empty tuple; write Default");
      tokens.push_back(std::move(t));
    } else {
      scan.fail("expected Default or a tuple");
    }
    scan.expect(',');
    scan.skip_spaces();
  }
  return tokens;
}

petri::Inscription parse_inscription(std::string_view text) {
  TupleScanner scan(text, "bad-inscription");
  petri::Inscription ins;
  std::size_t i = 0;
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  if (trim(text).empty()) return ins;
  // Split on commas outside quotes.
  while (i <= text.size()) {
    std::size_t start = i;
    bool in_quote = false;
    while (i < text.size() && (in_quote || text[i] != ',')) {
      if (text[i] == '\\' && in_quote) ++i;
      else if (text[i] == '"') in_quote = !in_quote;
      ++i;
    }
    std::string_view item = trim(text.substr(start, i - start));
    if (item.size() >= 2 && item.front() == '\'' && item.back() == '\'') {
      std::string_view sym = item.substr(1, item.size() - 2);
      if (!is_identifier(sym) || is_keyword(sym)) scan.fail("bad symbol constant");
      ins.push_back(Atom::symbol(std::string(sym)));
    } else if (is_identifier(item) && !is_keyword(item)) {
      ins.push_back(petri::Variable{std::string(item)});
    } else {
      try {
        ins.push_back(parse_atom(item));
      } catch (const Error& e) {
        scan.fail(e.what());
      }
    }
    ++i;
  }
  return ins;
}

std::string write_pnml(const PrTNet& net) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"ISO-8859-1\"?>\n"
      << "<pnml>\n"
      << "  <net type=\"PrT net\" id=\"" << xml::escape_attr(net.id) << "\">\n"
      << "    <tokenclass id=\"Default\" blue=\"0\" green=\"0\" red=\"0\" enabled=\"true\"/>\n";
  if (std::string line = init_line(net); !line.empty()) {
    out << "    <labels border=\"true\" height=\"13\" width=\"539\" y=\"316\" x=\"83\">\n"
        << "      <text>" << xml::escape_text(line) << "</text>\n"
        << "    </labels>\n";
  }
  std::map<std::string, std::vector<Token>> marking;
  for (const auto& [place, token] : net.init) marking[place].push_back(token);

  for (const auto* p : by_id(net.places)) {
    out << "    <place id=\"" << xml::escape_attr(p->id) << "\">\n"
        << "      <graphics>\n"
        << "        <position y=\"" << position_text(p->position.y) << "\" x=\""
        << position_text(p->position.x) << "\"/>\n"
        << "      </graphics>\n";
    value_block(out, "name", p->name);
    auto it = marking.find(p->id);
    value_block(out, "initialMarking",
                it == marking.end() ? std::string() : format_marking_value(it->second));
    value_block(out, "capacity", std::to_string(p->capacity));
    out << "    </place>\n";
  }
  for (const auto* t : by_id(net.transitions)) {
    out << "    <transition id=\"" << xml::escape_attr(t->id) << "\""
        << (t->silent ? " silent=\"true\"" : "") << ">\n"
        << "      <graphics>\n"
        << "        <position y=\"" << position_text(t->position.y) << "\" x=\""
        << position_text(t->position.x) << "\"/>\n"
        << "      </graphics>\n";
    value_block(out, "name", t->name);
    out << "      <guard><value>" << (t->guard ? xml::escape_text(print_expr(*t->guard)) : "")
        << "</value></guard>\n";
    if (t->annotation) {
      out << "      <annotation><value>" << xml::escape_text(*t->annotation)
          << "</value></annotation>\n";
    }
    out << "    </transition>\n";
  }
  for (const auto* a : by_id(net.arcs)) {
    out << "    <arc id=\"" << xml::escape_attr(a->id) << "\" source=\""
        << xml::escape_attr(a->source) << "\" target=\"" << xml::escape_attr(a->target) << "\">\n"
        << "      <inscription><value>" << xml::escape_text(petri::inscription_to_string(a->inscription))
        << "</value></inscription>\n"
        << "    </arc>\n";
  }
  out << "  </net>\n"
      << "</pnml>\n";
  return xml::utf8_to_latin1(out.str());
}

namespace {

class NetReader {
 public:
  explicit NetReader(std::string_view input) : input_(input) {}

  PrTNet read() {
    xml::Document doc = xml::parse(input_);
    std::string lowered = doc.encoding.value_or("UTF-8");
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lowered == "iso-8859-1" || lowered == "latin1" || lowered == "latin-1") {
      utf8_ = xml::latin1_to_utf8(input_);
      input_ = utf8_;
      doc = xml::parse(input_);
    }
    const xml::Element& root = doc.root;
    if (root.name != "pnml") fail(root, "unknown-element", "root element must be <pnml>");
    attributes(root, {});
    if (root.children.size() != 1 || root.children[0].name != "net") {
      fail(root, "unknown-element", "<pnml> must contain exactly one <net>");
    }
    const xml::Element& ne = root.children[0];
    attributes(ne, {"type", "id"});
    if (required(ne, "type") != "PrT net") fail(ne, "bad-net-type", "net type must be 'PrT net'");
    PrTNet net;
    net.id = required(ne, "id");

    const xml::Element* labels = nullptr;
    bool seen_tokenclass = false;
    for (const auto& c : ne.children) {
      if (c.name == "tokenclass") {
        if (seen_tokenclass) fail(c, "unknown-element", "second <tokenclass>");
        seen_tokenclass = true;
        attributes(c, {"id", "blue", "green", "red", "enabled"});
      } else if (c.name == "labels") {
        if (labels) fail(c, "unknown-element", "second <labels>");
        labels = &c;
        attributes(c, {"border", "height", "width", "x", "y"});
      } else if (c.name == "place") {
        read_place(c, net);
      } else if (c.name == "transition") {
        read_transition(c, net);
      } else if (c.name == "arc") {
        read_arc(c, net);
      } else {
        fail(c, "unknown-element", "unexpected <" + c.name + "> in <net>");
      }
    }
    if (labels) read_init(*labels, net);
    return net;
  }

 private:
  [[noreturn]] void fail(const xml::Element& at, const std::string& code,
                         const std::string& what) const {
    throw Error(code, what + " at " + xml::describe_offset(input_, at.offset), at.offset);
  }

  void attributes(const xml::Element& e, std::initializer_list<std::string_view> allowed) const {
    for (const auto& [k, v] : e.attributes) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
        fail(e, "unknown-attribute", "unexpected attribute '" + k + "' on <" + e.name + ">");
      }
    }
  }

  std::string required(const xml::Element& e, std::string_view key) const {
    const std::string* v = e.attr(key);
    if (!v) fail(e, "missing-attribute", "<" + e.name + "> needs '" + std::string(key) + "'");
    return *v;
  }

  const xml::Element& child(const xml::Element& e, std::string_view name) const {
    const xml::Element* c = e.child(name);
    if (!c) fail(e, "missing-element", "<" + e.name + "> needs <" + std::string(name) + ">");
    return *c;
  }

  // <tag><value>text</value></tag>
  std::string value_of(const xml::Element& e) const {
    attributes(e, {});
    if (e.children.size() != 1 || e.children[0].name != "value") {
      fail(e, "missing-element", "<" + e.name + "> must hold a single <value>");
    }
    const xml::Element& v = e.children[0];
    attributes(v, {});
    if (!v.children.empty()) fail(v.children[0], "unknown-element", "<value> holds text only");
    return v.text;
  }

  petri::Position position(const xml::Element& owner) const {
    const xml::Element& g = child(owner, "graphics");
    attributes(g, {});
    if (g.children.size() != 1 || g.children[0].name != "position") {
      fail(g, "missing-element", "<graphics> must hold a single <position>");
    }
    const xml::Element& p = g.children[0];
    attributes(p, {"x", "y"});
    return {coordinate(p, required(p, "x")), coordinate(p, required(p, "y"))};
  }

  int coordinate(const xml::Element& e, const std::string& text) const {
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || v != std::floor(v) ||
        std::fabs(v) > 1e9) {
      fail(e, "bad-position", "coordinate '" + text + "' is not an integral number");
    }
    return static_cast<int>(v);
  }

  void only_children(const xml::Element& e, std::initializer_list<std::string_view> allowed) const {
    for (const auto& c : e.children) {
      if (std::find(allowed.begin(), allowed.end(), c.name) == allowed.end()) {
        fail(c, "unknown-element", "unexpected <" + c.name + "> in <" + e.name + ">");
      }
    }
  }

  void read_place(const xml::Element& e, PrTNet& net) {
    attributes(e, {"id"});
    only_children(e, {"graphics", "name", "initialMarking", "capacity"});
    petri::Place p;
    p.id = required(e, "id");
    p.position = position(e);
    p.name = value_of(child(e, "name"));
    const std::string cap = value_of(child(e, "capacity"));
    std::uint32_t capacity = 0;
    auto [ptr, ec] = std::from_chars(cap.data(), cap.data() + cap.size(), capacity);
    if (ec != std::errc() || ptr != cap.data() + cap.size()) {
      fail(e, "bad-number", "capacity '" + cap + "' is not a non-negative integer");
    }
    p.capacity = capacity;
    const xml::Element& im = child(e, "initialMarking");
    try {
      for (auto& t : parse_marking_value(value_of(im))) net.init.push_back({p.id, std::move(t)});
    } catch (const Error& err) {
      fail(im, err.code(), err.what());
    }
    net.places.push_back(std::move(p));
  }

  void read_transition(const xml::Element& e, PrTNet& net) {
    attributes(e, {"id", "silent"});
    only_children(e, {"graphics", "name", "guard", "annotation"});
    petri::Transition t;
    t.id = required(e, "id");
    if (const auto* s = e.attr("silent")) {
      if (*s != "true" && *s != "false") fail(e, "bad-attribute", "silent must be true or false");
      t.silent = *s == "true";
    }
    t.position = position(e);
    t.name = value_of(child(e, "name"));
    if (const auto* g = e.child("guard")) {
      std::string text = value_of(*g);
      if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
        try {
          t.guard = ingest::parse_expr(text);
        } catch (const Error& err) {
          fail(*g, "bad-guard", err.what());
        }
      }
    }
    if (const auto* a = e.child("annotation")) t.annotation = value_of(*a);
    net.transitions.push_back(std::move(t));
  }

  void read_arc(const xml::Element& e, PrTNet& net) {
    attributes(e, {"id", "source", "target"});
    only_children(e, {"inscription"});
    petri::Arc a;
    a.id = required(e, "id");
    a.source = required(e, "source");
    a.target = required(e, "target");
    if (const auto* ins = e.child("inscription")) {
      try {
        a.inscription = parse_inscription(value_of(*ins));
      } catch (const Error& err) {
        fail(*ins, "bad-inscription", err.what());
      }
    }
    net.arcs.push_back(std::move(a));
  }

  // The INIT line restates the non-Default initial tokens. Entries must
  // agree with the places' initial markings. A places-only document (the
  // excerpt form, no transitions) may name places it does not declare;
  // those entries are kept as initial tokens for later checking.
  void read_init(const xml::Element& labels, PrTNet& net) const {
    only_children(labels, {"text"});
    const xml::Element& text = child(labels, "text");
    std::string_view line = text.text;
    if (line.substr(0, 5) != "INIT ") fail(text, "bad-init-line", "label must start with 'INIT '");
    TupleScanner scan(line.substr(5), "bad-init-line");
    std::map<std::string, std::vector<Token>> declared;
    std::vector<std::pair<std::string, Token>> unresolved;
    try {
      scan.skip_spaces();
      while (!scan.done()) {
        std::string place = scan.identifier();
        Token t = scan.tuple();
        if (t.empty()) scan.fail("INIT tuples must not be empty");
        if (net.find_place(place)) {
          declared[place].push_back(std::move(t));
        } else if (net.transitions.empty()) {
          unresolved.push_back({place, std::move(t)});
        } else {
          scan.fail("INIT names unknown place '" + place + "'");
        }
        scan.skip_spaces();
        if (scan.done()) break;
        scan.expect(',');
        scan.skip_spaces();
      }
    } catch (const Error& err) {
      fail(text, "bad-init-line", err.what());
    }
    std::map<std::string, std::vector<Token>> marked;
    for (const auto& [place, token] : net.init) {
      if (!token.empty()) marked[place].push_back(token);
    }
    for (auto* m : {&declared, &marked}) {
      for (auto& [place, toks] : *m) std::sort(toks.begin(), toks.end());
    }
    if (declared != marked) {
      fail(text, "bad-init-line", "INIT line disagrees with the places' initial markings");
    }
    for (auto& entry : unresolved) net.init.push_back(std::move(entry));
  }

  std::string_view input_;
  std::string utf8_;
};

}  // namespace

PrTNet read_pnml(std::string_view doc) { return NetReader(doc).read(); }

}  // namespace atcg::pnml
