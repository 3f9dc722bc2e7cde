#include "atcg/testgen.hpp"

#include <map>
#include <variant>

namespace atcg::testgen {

FiringRecord record_firing(const petri::PrTNet& net, const petri::Firing& f) {
  FiringRecord r;
  r.transition_id = f.transition;
  const petri::Transition* t = net.find_transition(f.transition);
  r.transition_name = t ? t->name : f.transition;
  r.silent = t && t->silent;
  if (t) r.annotation = t->annotation;
  for (const petri::Arc* a : net.input_arcs(f.transition)) {
    for (const auto& term : a->inscription) {
      if (const auto* v = std::get_if<petri::Variable>(&term)) {
        auto it = f.binding.find(v->name);
        if (it != f.binding.end()) r.args.push_back(it->second);
      }
    }
  }
  return r;
}

TestSuite scenarios(const petri::PrTNet& net, const petri::TestTree& tree) {
  TestSuite suite;
  suite.net_id = net.id;
  std::vector<FiringRecord> records(tree.vertices.size());
  for (std::size_t v = 1; v < tree.vertices.size(); ++v) {
    records[v] = record_firing(net, *tree.vertices[v].firing);
  }
  for (std::size_t v = 1; v < tree.vertices.size(); ++v) {
    Scenario s;
    s.trace = "m" + std::to_string(tree.vertices[0].state);
    for (std::size_t step : tree.path_to(v)) {
      s.firings.push_back(records[step]);
      s.trace += "->" + tree.vertices[step].firing->transition + "->m" +
                 std::to_string(tree.vertices[step].state);
    }
    s.maximal = tree.vertices[v].children.empty();
    suite.scenarios.push_back(std::move(s));
  }
  return suite;
}

std::string format_call(const FiringRecord& r) {
  std::string out = r.transition_name + "(";
  for (std::size_t i = 0; i < r.args.size(); ++i) {
    if (i) out += ", ";
    out += r.args[i].to_string();
  }
  out += ')';
  return out;
}

TestSuite maximal_only(TestSuite suite) {
  std::erase_if(suite.scenarios, [](const Scenario& s) { return !s.maximal; });
  return suite;
}

std::string format_model_tests(const TestSuite& suite, bool maximal_only) {
  std::string out = "Model-Level Tests\n";
  std::size_t n = 0;
  for (const auto& s : suite.scenarios) {
    if (maximal_only && !s.maximal) continue;
    out += std::to_string(++n) + ".";
    bool first = true;
    for (const auto& r : s.firings) {
      if (r.silent) continue;
      out += first ? " " : ", ";
      first = false;
      out += format_call(r);
    }
    out += '\n';
  }
  return out;
}

}  // namespace atcg::testgen
