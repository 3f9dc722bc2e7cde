#pragma once

#include <map>
#include <string>
#include <string_view>

#include "atcg/testgen.hpp"

namespace atcg::codegen {

// Placeholders use `{{name}}`. The fixture block may use {{net}} and
// {{tests}}; the per-test block {{net}}, {{n}}, {{calls}} and
// {{oracleComments}}. List placeholders ({{tests}}, {{calls}},
// {{oracleComments}}) repeat their whole line once per item, keeping the
// text around the placeholder; an empty list drops the line.
struct Template {
  std::string id;
  std::string ext;
  std::string header;
  std::string fixture_block;
  std::string per_test_block;
};

struct RenderedScript {
  std::string file_name;
  std::string body;
};

// Parses the three `---`-separated blocks. Throws Error("bad-template").
Template parse_template(std::string_view text, std::string id, std::string ext);

class Registry {
 public:
  // Holds the built-in "fixture-style" template (NUnit/C#).
  Registry();

  // Throws Error("duplicate-template") when the id is taken.
  void add(Template t);
  // `<id>.<ext>.tmpl` on disk; id and ext come from the file name.
  const Template& load_file(const std::string& path);
  const Template* find(const std::string& id) const;

 private:
  std::map<std::string, Template> templates_;
};

// Throws Error("unknown-template").
RenderedScript render(const testgen::TestSuite& suite, const std::string& template_id,
                      const Registry& registry = Registry());

}  // namespace atcg::codegen
