#pragma once

#include <optional>
#include <string>
#include <vector>

#include "atcg/net.hpp"
#include "atcg/petri.hpp"

namespace atcg::testgen {

struct FiringRecord {
  std::string transition_id;
  std::string transition_name;
  std::vector<Atom> args;  // bound input-arc variables, in arc order
  bool silent = false;
  std::optional<std::string> annotation;  // postcondition, when the transition has one

  bool operator==(const FiringRecord&) const = default;
};

struct Scenario {
  std::vector<FiringRecord> firings;
  std::string trace;  // m0->T1->m1->...
  bool maximal = false;  // ends on a tree leaf

  bool operator==(const Scenario&) const = default;
};

struct TestSuite {
  std::string net_id;
  std::vector<Scenario> scenarios;  // depth-first preorder of the tree
};

// Name, silent flag and bound arguments of one firing.
FiringRecord record_firing(const petri::PrTNet& net, const petri::Firing& f);

// One scenario per non-root vertex: the firing sequence of its root path.
TestSuite scenarios(const petri::PrTNet& net, const petri::TestTree& tree);

// `name(a1, a2)`.
std::string format_call(const FiringRecord& r);

// Keeps only the scenarios ending on a tree leaf.
TestSuite maximal_only(TestSuite suite);

// "Model-Level Tests" followed by `<n>. call, call, ...` lines; silent
// firings are omitted. With maximal_only, only scenarios ending on a tree
// leaf are listed.
std::string format_model_tests(const TestSuite& suite, bool maximal_only);

}  // namespace atcg::testgen
