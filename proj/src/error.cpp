#include "atcg/error.hpp"

#include <algorithm>
#include <sstream>

namespace atcg {

bool ValidationReport::has_error(const std::string& code) const {
  return count_errors(code) > 0;
}

std::size_t ValidationReport::count_errors(const std::string& code) const {
  return static_cast<std::size_t>(std::count_if(
      errors.begin(), errors.end(), [&](const Issue& i) { return i.code == code; }));
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& e : errors) {
    out << "error: " << e.code << " at " << e.location << ": " << e.message << '\n';
  }
  for (const auto& w : warnings) {
    out << "warning: " << w.code << " at " << w.location << ": " << w.message << '\n';
  }
  return out.str();
}

}  // namespace atcg
