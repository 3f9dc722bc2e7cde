#pragma once

#include <string>
#include <string_view>

#include "atcg/net.hpp"

namespace atcg::pnml {

// Writes the ISO-8859-1 PNML dialect: tokenclass, an INIT label listing
// the non-Default initial tokens, then places, transitions and arcs sorted
// by id. Returns the document bytes.
std::string write_pnml(const petri::PrTNet& net);

// Inverse of write_pnml. Throws Error("xml-syntax", "unknown-element",
// "unknown-attribute", "missing-element", "missing-attribute",
// "bad-init-line", "bad-inscription", "bad-marking", "bad-guard",
// "bad-position", "bad-number").
petri::PrTNet read_pnml(std::string_view doc);

// Marking values in the `Default,(a,b),` form.
std::string format_marking_value(const std::vector<Token>& tokens);
std::vector<Token> parse_marking_value(std::string_view text);

petri::Inscription parse_inscription(std::string_view text);

}  // namespace atcg::pnml
