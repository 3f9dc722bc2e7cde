#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace atcg {

// Every failure the toolchain signals carries a short machine-readable code
// ("arity-mismatch", "not-enabled", ...) plus a human message. Parse errors
// also carry the byte offset of the offending input.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message,
        std::optional<std::size_t> offset = std::nullopt)
      : std::runtime_error(message), code_(std::move(code)), offset_(offset) {}

  const std::string& code() const noexcept { return code_; }
  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  std::string code_;
  std::optional<std::size_t> offset_;
};

struct Issue {
  std::string code;
  std::string location;
  std::string message;

  bool operator==(const Issue&) const = default;
};

// Errors are data: validators collect every problem instead of stopping at
// the first one.
struct ValidationReport {
  std::vector<Issue> errors;
  std::vector<Issue> warnings;

  bool ok() const noexcept { return errors.empty(); }

  void error(std::string code, std::string location, std::string message) {
    errors.push_back({std::move(code), std::move(location), std::move(message)});
  }
  void warn(std::string code, std::string location, std::string message) {
    warnings.push_back({std::move(code), std::move(location), std::move(message)});
  }

  bool has_error(const std::string& code) const;
  std::size_t count_errors(const std::string& code) const;
  std::string to_string() const;

  bool operator==(const ValidationReport&) const = default;
};

}  // namespace atcg
