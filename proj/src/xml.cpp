#include "atcg/xml.hpp"

#include <cstdint>

#include "atcg/error.hpp"

namespace atcg::xml {

const std::string* Element::attr(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return &v;
  }
  return nullptr;
}

const Element* Element::child(std::string_view key) const {
  for (const auto& c : children) {
    if (c.name == key) return &c;
  }
  return nullptr;
}

namespace {

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool name_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':' ||
         (static_cast<unsigned char>(c) >= 0x80);
}

bool name_char(char c) {
  return name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

class Parser {
 public:
  explicit Parser(std::string_view in) : in_(in) {}

  Document run() {
    Document doc;
    skip_bom();
    skip_ws();
    if (starts_with("<?xml")) doc.encoding = parse_declaration();
    skip_misc();
    if (at_end() || peek() != '<') fail("expected root element");
    doc.root = parse_element();
    skip_misc();
    if (!at_end()) fail("content after root element");
    return doc;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error("xml-syntax", what + " at " + describe_offset(in_, pos_), pos_);
  }

  bool at_end() const { return pos_ >= in_.size(); }
  char peek() const { return in_[pos_]; }
  bool starts_with(std::string_view s) const { return in_.substr(pos_, s.size()) == s; }

  void expect(std::string_view s) {
    if (!starts_with(s)) fail("expected '" + std::string(s) + "'");
    pos_ += s.size();
  }

  void skip_bom() {
    if (starts_with("\xEF\xBB\xBF")) pos_ += 3;
  }

  void skip_ws() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\n' || peek() == '\r')) {
      ++pos_;
    }
  }

  void skip_until(std::string_view terminator, const char* what) {
    auto end = in_.find(terminator, pos_);
    if (end == std::string_view::npos) fail(std::string("unterminated ") + what);
    pos_ = end + terminator.size();
  }

  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts_with("<!--")) {
        skip_until("-->", "comment");
      } else if (starts_with("<?")) {
        skip_until("?>", "processing instruction");
      } else if (starts_with("<!DOCTYPE")) {
        skip_until(">", "doctype");
      } else {
        return;
      }
    }
  }

  std::optional<std::string> parse_declaration() {
    pos_ += 5;
    std::optional<std::string> encoding;
    for (;;) {
      skip_ws();
      if (starts_with("?>")) {
        pos_ += 2;
        return encoding;
      }
      if (at_end()) fail("unterminated XML declaration");
      auto [key, value] = parse_attribute();
      if (key == "encoding") encoding = value;
    }
  }

  std::string parse_name() {
    std::size_t start = pos_;
    if (at_end() || !name_start(peek())) fail("expected a name");
    while (!at_end() && name_char(peek())) ++pos_;
    return std::string(in_.substr(start, pos_ - start));
  }

  std::pair<std::string, std::string> parse_attribute() {
    std::string key = parse_name();
    skip_ws();
    expect("=");
    skip_ws();
    if (at_end() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
    char quote = in_[pos_++];
    std::string value;
    while (!at_end() && peek() != quote) {
      if (peek() == '<') fail("'<' in attribute value");
      if (peek() == '&') {
        parse_reference(value);
      } else {
        value += in_[pos_++];
      }
    }
    if (at_end()) fail("unterminated attribute value");
    ++pos_;
    return {std::move(key), std::move(value)};
  }

  void parse_reference(std::string& out) {
    std::size_t start = pos_;
    auto end = in_.find(';', pos_);
    if (end == std::string_view::npos || end - pos_ > 12) fail("malformed entity reference");
    std::string_view ref = in_.substr(pos_ + 1, end - pos_ - 1);
    pos_ = end + 1;
    if (ref == "lt") out += '<';
    else if (ref == "gt") out += '>';
    else if (ref == "amp") out += '&';
    else if (ref == "quot") out += '"';
    else if (ref == "apos") out += '\'';
    else if (ref.size() > 1 && ref[0] == '#') {
      std::uint32_t cp = 0;
      bool hex = ref[1] == 'x';
      std::string_view digits = ref.substr(hex ? 2 : 1);
      if (digits.empty()) {
        pos_ = start;
        fail("empty character reference");
      }
      for (char c : digits) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
        else {
          pos_ = start;
          fail("bad character reference");
        }
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
        if (cp > 0x10FFFF) {
          pos_ = start;
          fail("character reference out of range");
        }
      }
      append_utf8(out, cp);
    } else {
      pos_ = start;
      fail("unknown entity '" + std::string(ref) + "'");
    }
  }

  Element parse_element() {
    Element el;
    el.offset = pos_;
    expect("<");
    el.name = parse_name();
    for (;;) {
      bool had_ws = !at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\n' || peek() == '\r');
      skip_ws();
      if (at_end()) fail("unterminated start tag");
      if (starts_with("/>")) {
        pos_ += 2;
        return el;
      }
      if (peek() == '>') {
        ++pos_;
        break;
      }
      if (!had_ws) fail("expected whitespace before attribute");
      std::size_t attr_pos = pos_;
      auto attribute = parse_attribute();
      if (el.attr(attribute.first)) {
        pos_ = attr_pos;
        fail("duplicate attribute '" + attribute.first + "'");
      }
      el.attributes.push_back(std::move(attribute));
    }
    for (;;) {
      if (at_end()) fail("unterminated element <" + el.name + ">");
      if (starts_with("</")) {
        pos_ += 2;
        std::size_t name_pos = pos_;
        std::string close = parse_name();
        if (close != el.name) {
          pos_ = name_pos;
          fail("mismatched end tag </" + close + "> for <" + el.name + ">");
        }
        skip_ws();
        expect(">");
        return el;
      }
      if (starts_with("<!--")) {
        skip_until("-->", "comment");
      } else if (starts_with("<![CDATA[")) {
        pos_ += 9;
        auto end = in_.find("]]>", pos_);
        if (end == std::string_view::npos) fail("unterminated CDATA section");
        el.text.append(in_.substr(pos_, end - pos_));
        pos_ = end + 3;
      } else if (starts_with("<?")) {
        skip_until("?>", "processing instruction");
      } else if (peek() == '<') {
        el.children.push_back(parse_element());
      } else if (peek() == '&') {
        parse_reference(el.text);
      } else {
        el.text += in_[pos_++];
      }
    }
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

Document parse(std::string_view input) { return Parser(input).run(); }

std::string describe_offset(std::string_view input, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < input.size(); ++i) {
    if (input[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

std::string escape_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else out += c;
  }
  return out;
}

std::string escape_attr(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '"') out += "&quot;";
    else out += c;
  }
  return out;
}

std::string latin1_to_utf8(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  for (char c : in) append_utf8(out, static_cast<unsigned char>(c));
  return out;
}

std::string utf8_to_latin1(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size();) {
    auto b = static_cast<unsigned char>(in[i]);
    std::uint32_t cp;
    std::size_t len;
    if (b < 0x80) {
      cp = b;
      len = 1;
    } else if ((b & 0xE0) == 0xC0) {
      cp = b & 0x1F;
      len = 2;
    } else if ((b & 0xF0) == 0xE0) {
      cp = b & 0x0F;
      len = 3;
    } else if ((b & 0xF8) == 0xF0) {
      cp = b & 0x07;
      len = 4;
    } else {
      throw Error("bad-encoding", "invalid UTF-8 lead byte", i);
    }
    if (i + len > in.size()) throw Error("bad-encoding", "truncated UTF-8 sequence", i);
    for (std::size_t k = 1; k < len; ++k) {
      auto cont = static_cast<unsigned char>(in[i + k]);
      if ((cont & 0xC0) != 0x80) throw Error("bad-encoding", "invalid UTF-8 continuation", i + k);
      cp = (cp << 6) | (cont & 0x3F);
    }
    if (cp <= 0xFF) {
      out += static_cast<char>(cp);
    } else {
      out += "&#" + std::to_string(cp) + ";";
    }
    i += len;
  }
  return out;
}

}  // namespace atcg::xml
