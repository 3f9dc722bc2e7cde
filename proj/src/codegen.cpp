#include "atcg/codegen.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "atcg/error.hpp"

namespace atcg::codegen {
namespace {

constexpr std::string_view kFixtureStyle = R"(//Test code generated by atcg
---
using System;
using NUnit.Framework;

[TestFixture]
public class {{net}}Tester_RT {
    private {{net}} {{net}};

    [SetUp]
    public void Init() {
        {{net}} = new {{net}}();
    }

    private void Assert(bool condition, string errorMessage) {
        if (!condition) {
            Console.WriteLine(errorMessage);
            Console.WriteLine("\nPress any key to continue...");
            Console.Read();
            Environment.Exit(1);
        }
    }
{{tests}}
}
---

    [Test]
    public void test{{n}}() {
        // {{oracleComments}}
        {{net}}.{{calls}};
    }
)";

const std::set<std::string> kListPlaceholders = {"tests", "calls", "oracleComments"};

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::vector<std::string> placeholders_in(std::string_view text) {
  std::vector<std::string> found;
  std::size_t pos = 0;
  while ((pos = text.find("{{", pos)) != std::string_view::npos) {
    auto end = text.find("}}", pos);
    if (end == std::string_view::npos) {
      throw Error("bad-template", "unterminated placeholder");
    }
    found.emplace_back(text.substr(pos + 2, end - pos - 2));
    pos = end + 2;
  }
  return found;
}

void check_block(std::string_view block, const std::set<std::string>& allowed, const char* what) {
  for (const auto& line : lines_of(block)) {
    int lists = 0;
    for (const auto& p : placeholders_in(line)) {
      if (!allowed.count(p)) {
        throw Error("bad-template", "placeholder {{" + p + "}} is not allowed in the " + what);
      }
      lists += kListPlaceholders.count(p) ? 1 : 0;
    }
    if (lists > 1) throw Error("bad-template", "one list placeholder per line");
  }
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

// Each line of `block` ends with '\n' in the output.
std::string expand(std::string_view block, const std::map<std::string, std::string>& scalars,
                   const std::map<std::string, std::vector<std::string>>& lists) {
  std::string out;
  for (std::string line : lines_of(block)) {
    for (const auto& [k, v] : scalars) line = replace_all(line, "{{" + k + "}}", v);
    bool expanded = false;
    for (const auto& [k, items] : lists) {
      const std::string ph = "{{" + k + "}}";
      auto pos = line.find(ph);
      if (pos == std::string::npos) continue;
      const std::string prefix = line.substr(0, pos);
      const std::string suffix = line.substr(pos + ph.size());
      for (const auto& item : items) {
        for (const auto& sub : lines_of(item)) {
          // Blank lines inside an item are not padded with the prefix.
          out += sub.empty() && prefix.find_first_not_of(' ') == std::string::npos && suffix.empty()
                     ? std::string()
                     : prefix + sub + suffix;
          out += '\n';
        }
      }
      expanded = true;
      break;
    }
    if (!expanded) out += line + '\n';
  }
  return out;
}

std::string code_literal(const Atom& a) {
  if (a.is_symbol()) return quote(a.str());
  return a.to_string();
}

}  // namespace

Template parse_template(std::string_view text, std::string id, std::string ext) {
  std::vector<std::string> blocks(1);
  for (const auto& line : lines_of(text)) {
    if (line == "---") {
      blocks.emplace_back();
    } else {
      blocks.back() += line;
      blocks.back() += '\n';
    }
  }
  if (blocks.size() != 3) {
    throw Error("bad-template", "template needs exactly three blocks separated by '---' lines");
  }
  check_block(blocks[0], {"net"}, "header");
  check_block(blocks[1], {"net", "tests"}, "fixture block");
  check_block(blocks[2], {"net", "n", "calls", "oracleComments"}, "per-test block");
  if (id.empty()) throw Error("bad-template", "template id is empty");
  return {std::move(id), std::move(ext), blocks[0], blocks[1], blocks[2]};
}

Registry::Registry() { add(parse_template(kFixtureStyle, "fixture-style", "cs")); }

void Registry::add(Template t) {
  const std::string id = t.id;
  if (!templates_.emplace(id, std::move(t)).second) {
    throw Error("duplicate-template", "template '" + id + "' is already registered");
  }
}

const Template& Registry::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io-error", "cannot read template file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  std::string name = std::filesystem::path(path).filename().string();
  if (name.size() > 5 && name.ends_with(".tmpl")) name.resize(name.size() - 5);
  std::string id = name, ext = "txt";
  if (auto dot = name.find('.'); dot != std::string::npos) {
    id = name.substr(0, dot);
    ext = name.substr(dot + 1);
  }
  add(parse_template(text.str(), id, ext));
  return *find(id);
}

const Template* Registry::find(const std::string& id) const {
  auto it = templates_.find(id);
  return it == templates_.end() ? nullptr : &it->second;
}

RenderedScript render(const testgen::TestSuite& suite, const std::string& template_id,
                      const Registry& registry) {
  const Template* t = registry.find(template_id);
  if (!t) throw Error("unknown-template", "no template named '" + template_id + "'");

  std::vector<std::string> tests;
  std::size_t n = 0;
  for (const auto& s : suite.scenarios) {
    std::vector<std::string> calls, oracles;
    for (const auto& r : s.firings) {
      if (r.silent) continue;
      std::string call = r.transition_name + "(";
      for (std::size_t i = 0; i < r.args.size(); ++i) {
        if (i) call += ", ";
        call += code_literal(r.args[i]);
      }
      calls.push_back(call + ")");
      if (r.annotation) oracles.push_back("post " + r.transition_name + ": " + *r.annotation);
    }
    tests.push_back(expand(t->per_test_block,
                           {{"net", suite.net_id}, {"n", std::to_string(++n)}},
                           {{"calls", calls}, {"oracleComments", oracles}}));
    // expand() terminates every line; the list expansion adds its own.
    if (!tests.back().empty() && tests.back().back() == '\n') tests.back().pop_back();
  }

  RenderedScript script;
  script.file_name = suite.net_id + "Tester_RT." + t->ext;
  script.body = expand(t->header, {{"net", suite.net_id}}, {}) +
                expand(t->fixture_block, {{"net", suite.net_id}}, {{"tests", tests}});
  return script;
}

}  // namespace atcg::codegen
