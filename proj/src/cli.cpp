#include "atcg/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "atcg/bridge.hpp"
#include "atcg/codegen.hpp"
#include "atcg/error.hpp"
#include "atcg/ingest.hpp"
#include "atcg/netgen.hpp"
#include "atcg/petri.hpp"
#include "atcg/pnml.hpp"
#include "atcg/sim.hpp"
#include "atcg/testgen.hpp"
#include "atcg/xml.hpp"

namespace atcg::cli {
namespace {

// Exit-code mapping for a thrown Error.
int code_for(const Error& e) {
  static const std::set<std::string> kInvalidCodes = {
      "invalid-model", "unbound-guard-variable", "inconsistent-input", "not-enabled",
      "capacity-exceeded"};
  return kInvalidCodes.count(e.code()) ? kInvalid : kParseError;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io-error", "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io-error", "cannot write " + path);
  out << bytes;
  if (!out) throw Error("io-error", "failed writing " + path);
}

bool is_model_document(const std::string& bytes) {
  // A model file's root element is <model>; anything else is read as PNML.
  try {
    return xml::parse(bytes).root.name == "model";
  } catch (const Error&) {
    return false;
  }
}

struct Common {
  std::string input;
  std::size_t max_depth = petri::Bounds{}.max_depth;
  std::size_t max_states = petri::Bounds{}.max_states;
  std::size_t loop_unroll = 0;
  bool loop_unroll_set = false;

  petri::Bounds bounds() const {
    petri::Bounds b;
    b.max_depth = max_depth;
    b.max_states = max_states;
    if (loop_unroll_set) b.loop_unroll = loop_unroll;
    return b;
  }
};

petri::PrTNet build_from_model(const std::string& bytes, const petri::Bounds& b,
                               std::ostream& err) {
  model::DesignModel dm = ingest::parse_model_xml(bytes);
  ValidationReport report = model::validate_model(dm.classes, dm.sequence);
  err << report.to_string();
  if (!report.ok()) throw Error("invalid-model", "model has validation errors");
  netgen::Options opts;
  opts.loop_unroll = b.loop_unroll;
  return netgen::generate(dm, opts);
}

// Reads a PNML net, or builds one when handed a model file, then compiles.
petri::PrTNet load_net(const Common& c, std::ostream& err) {
  std::string bytes = read_file(c.input);
  petri::PrTNet net = is_model_document(bytes) ? build_from_model(bytes, c.bounds(), err)
                                               : pnml::read_pnml(bytes);
  ValidationReport report = petri::compile_net(net);
  if (!report.ok()) {
    err << report.to_string();
    throw Error("invalid-model", "net does not compile");
  }
  return net;
}

void add_bounds(CLI::App* cmd, Common& c) {
  cmd->add_option("--max-depth", c.max_depth, "Exploration depth bound")->check(CLI::PositiveNumber);
  cmd->add_option("--max-states", c.max_states, "State / vertex budget")->check(CLI::PositiveNumber);
  cmd->add_option_function<std::size_t>(
      "--loop-unroll",
      [&c](const std::size_t& k) {
        c.loop_unroll = k;
        c.loop_unroll_set = true;
      },
      "Extra iterations allowed per loop fragment (model inputs)");
}

void print_tree(const petri::PrTNet& net, const petri::TestTree& tree, std::size_t v,
                std::size_t indent, std::ostream& out) {
  const auto& vertex = tree.vertices[v];
  out << std::string(indent * 2, ' ');
  if (vertex.firing) {
    out << vertex.firing->transition << ' '
        << testgen::format_call(testgen::record_firing(net, *vertex.firing)) << " -> ";
  }
  out << 'm' << vertex.state;
  if (vertex.kind != petri::LeafKind::Inner) out << " [" << petri::to_string(vertex.kind) << ']';
  out << '\n';
  for (std::size_t c : vertex.children) print_tree(net, tree, c, indent + 1, out);
}

void print_sim_state(const sim::SimSession& s, std::ostream& out) {
  out << "marking: " << s.current().to_string() << '\n';
  if (s.enabled().empty()) {
    out << "enabled: none\n";
  } else {
    out << "enabled:\n";
    for (std::size_t i = 0; i < s.enabled().size(); ++i) {
      out << "  [" << i << "] " << s.label(s.enabled()[i]) << '\n';
    }
  }
}

int simulate(const petri::PrTNet& net, std::ostream& out, std::ostream& err, std::istream& in) {
  sim::SimSession session(std::make_shared<const petri::PrTNet>(net));
  print_sim_state(session, out);
  std::string line;
  while (out << "> " << std::flush, std::getline(in, line)) {
    std::string cmd;
    std::istringstream words(line);
    words >> cmd;
    if (cmd.empty()) continue;
    if (cmd == "quit" || cmd == "q") break;
    try {
      if (cmd == "undo") {
        session.undo();
      } else if (cmd == "reset") {
        session.reset();
      } else if (cmd == "history") {
        for (const auto& f : session.history()) out << "  " << session.label(f) << '\n';
        continue;
      } else {
        std::size_t pos = 0;
        std::size_t choice = std::stoul(cmd, &pos);
        if (pos != cmd.size()) throw std::invalid_argument(cmd);
        const std::string label = session.label(session.enabled().at(choice));
        session.fire(choice);
        out << "fired " << label << '\n';
      }
    } catch (const Error& e) {
      err << "error: " << e.code() << ": " << e.what() << '\n';
    } catch (const std::logic_error&) {
      err << "error: bad-choice: expected an index, undo, reset, history or quit\n";
    }
    print_sim_state(session, out);
  }
  out << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in) {
  CLI::App app{"atcg: design model -> PrT net -> test tree -> tests and test code", "atcg"};
  app.require_subcommand(1);

  Common c;
  std::string output;
  bool all = false;
  std::string template_id = "fixture-style";
  std::vector<std::string> template_files;
  int port = 8080;

  auto* validate = app.add_subcommand("validate", "Check a design model");
  validate->add_option("model", c.input, "ATCG-XML model")->required();

  auto* build = app.add_subcommand("build", "Compile a design model into a PNML net");
  build->add_option("model", c.input, "ATCG-XML model")->required();
  build->add_option("-o,--output", output, "Output net file (default: stdout)");
  add_bounds(build, c);

  auto* compile = app.add_subcommand("compile", "Check a net for structural errors");
  auto* reach = app.add_subcommand("reach", "Print the reachability graph");
  auto* tree = app.add_subcommand("tree", "Print the round-trip test tree");
  auto* tests = app.add_subcommand("tests", "Print model-level tests");
  tests->add_flag("--all", all, "Every tree vertex, not only maximal paths");
  auto* code = app.add_subcommand("code", "Render test code from a template");
  code->add_flag("--all", all, "One test per tree vertex, not only maximal paths");
  code->add_option("--template", template_id, "Template id");
  code->add_option("--template-file", template_files, "Extra template file(s) <id>.<ext>.tmpl");
  code->add_option("-o,--output", output, "Output file or directory (default: stdout)");
  auto* simulate_cmd = app.add_subcommand("simulate", "Interactive token game on stdin");
  auto* serve = app.add_subcommand("serve", "Serve the simulation bridge over HTTP");
  serve->add_option("--port", port, "TCP port (ATCG_PORT overrides)");
  for (auto* cmd : {compile, reach, tree, tests, code, simulate_cmd, serve}) {
    cmd->add_option("net", c.input, "PNML net (or ATCG-XML model)")->required();
    if (cmd != compile) add_bounds(cmd, c);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (validate->parsed()) {
      model::DesignModel dm = ingest::parse_model_xml(read_file(c.input));
      ValidationReport report = model::validate_model(dm.classes, dm.sequence);
      err << report.to_string();
      out << (report.ok() ? "valid" : "invalid") << ": " << report.errors.size() << " error(s), "
          << report.warnings.size() << " warning(s)\n";
      return report.ok() ? kOk : kInvalid;
    }
    if (build->parsed()) {
      petri::PrTNet net = build_from_model(read_file(c.input), c.bounds(), err);
      std::string doc = pnml::write_pnml(net);
      if (output.empty()) out << doc;
      else write_file(output, doc);
      return kOk;
    }
    if (compile->parsed()) {
      std::string bytes = read_file(c.input);
      petri::PrTNet net = is_model_document(bytes) ? build_from_model(bytes, c.bounds(), err)
                                                   : pnml::read_pnml(bytes);
      ValidationReport report = petri::compile_net(net);
      err << report.to_string();
      out << (report.ok() ? "ok" : "failed") << ": " << report.errors.size() << " error(s)\n";
      return report.ok() ? kOk : kInvalid;
    }

    petri::PrTNet net = load_net(c, err);
    const petri::Bounds bounds = c.bounds();

    if (reach->parsed()) {
      petri::ReachGraph g = petri::reach_graph(net, bounds);
      for (std::size_t i = 0; i < g.states.size(); ++i) {
        out << 'm' << i << ' ' << g.states[i].to_string() << '\n';
      }
      for (const auto& e : g.edges) {
        out << 'm' << e.from << " -" << e.transition << binding_to_string(e.binding) << "-> m"
            << e.to << '\n';
      }
      out << g.states.size() << " state(s), " << g.edges.size() << " edge(s)\n";
      if (g.truncated) err << "warning: exploration bounds exceeded\n";
      return g.truncated ? kBoundsExceeded : kOk;
    }
    if (tree->parsed()) {
      petri::TestTree t = petri::test_tree(net, bounds);
      print_tree(net, t, 0, 0, out);
      if (t.truncated) err << "warning: exploration bounds exceeded\n";
      return t.truncated ? kBoundsExceeded : kOk;
    }
    if (tests->parsed()) {
      petri::TestTree t = petri::test_tree(net, bounds);
      out << testgen::format_model_tests(testgen::scenarios(net, t), !all);
      if (t.truncated) err << "warning: exploration bounds exceeded\n";
      return t.truncated ? kBoundsExceeded : kOk;
    }
    if (code->parsed()) {
      codegen::Registry registry;
      for (const auto& f : template_files) registry.load_file(f);
      petri::TestTree t = petri::test_tree(net, bounds);
      testgen::TestSuite suite = testgen::scenarios(net, t);
      if (!all) suite = testgen::maximal_only(std::move(suite));
      codegen::RenderedScript script = codegen::render(suite, template_id, registry);
      if (output.empty()) {
        out << script.body;
      } else {
        std::filesystem::path target = output;
        if (std::filesystem::is_directory(target)) target /= script.file_name;
        write_file(target.string(), script.body);
        err << "wrote " << target.string() << '\n';
      }
      if (t.truncated) err << "warning: exploration bounds exceeded\n";
      return t.truncated ? kBoundsExceeded : kOk;
    }
    if (simulate_cmd->parsed()) return simulate(net, out, err, in);
    if (serve->parsed()) {
      if (const char* env = std::getenv("ATCG_PORT"); env && *env) port = std::atoi(env);
      bridge::Bridge b(std::move(net), bounds);
      err << "serving on http://127.0.0.1:" << port << '\n';
      if (!bridge::serve(b, port)) {
        err << "error: cannot listen on port " << port << '\n';
        return kUsage;
      }
      return kOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.code() << ": " << e.what() << '\n';
    return code_for(e);
  }
  return kUsage;
}

}  // namespace atcg::cli
