#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "atcg/net.hpp"

namespace atcg::test {

std::string fixture(const std::string& name);
std::string golden(const std::string& name);
std::string read_file(const std::string& path);

// Small random PrT nets: Default and symbol tokens, variable or constant
// inscriptions, occasional equality guards and capacities.
struct RandomNetShape {
  int max_places = 6;
  int max_transitions = 6;
  int max_tokens = 3;
  bool guards = true;
  bool capacities = true;
};

petri::PrTNet random_net(std::mt19937& rng, const RandomNetShape& shape = {});

using PlainMarking = std::map<std::string, std::multiset<Token>>;

// Brute-force state enumeration kept separate from the engine: every
// binding in the cartesian product of the atoms seen so far is tried, and
// token removal is checked by counting.
std::set<PlainMarking> enumerate_states(const petri::PrTNet& net, std::size_t max_depth);

}  // namespace atcg::test
