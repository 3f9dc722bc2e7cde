#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace atcg::xml {

// Minimal non-validating XML reader: elements, attributes, character data,
// comments, CDATA, processing instructions and the predefined/numeric
// entities. No namespaces, no DTD processing.
struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  std::string text;  // concatenated character data of this element
  std::size_t offset = 0;

  const std::string* attr(std::string_view key) const;
  const Element* child(std::string_view key) const;
};

struct Document {
  std::optional<std::string> encoding;  // from the XML declaration
  Element root;
};

// Throws Error("xml-syntax") with the byte offset of the problem.
Document parse(std::string_view input);

// 1-based "line:col" for diagnostics.
std::string describe_offset(std::string_view input, std::size_t offset);

// Escapes '&' and '<' (and '"' in attribute values).
std::string escape_text(std::string_view s);
std::string escape_attr(std::string_view s);

// Encoding conversions for the ISO-8859-1 interchange files. Code points
// above U+00FF become numeric character references.
std::string latin1_to_utf8(std::string_view in);
std::string utf8_to_latin1(std::string_view in);

}  // namespace atcg::xml
