#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "atcg/error.hpp"
#include "atcg/net.hpp"

namespace atcg::petri {

// Structural check of a net: duplicate ids, dangling or non-bipartite arcs,
// guard and output variables not bound by input arcs, initial tokens on
// unknown places or over capacity.
ValidationReport compile_net(const PrTNet& net);

struct Firing {
  std::string transition;  // transition id
  Binding binding;

  bool operator==(const Firing&) const = default;
};

// Every (transition, binding) whose input inscriptions unify with available
// tokens and whose guard holds. Each distinct token value is tried once per
// arc. Firings that would push a bounded place over its capacity are left
// out. Sorted by transition id (natural order), then binding.
std::vector<Firing> enabled(const PrTNet& net, const Marking& m);

// Throws Error("not-enabled"), or Error("capacity-exceeded") when the
// binding matches but an output place would overflow.
Marking fire(const PrTNet& net, const Marking& m, const Firing& f);

struct Bounds {
  std::size_t max_depth = 20;
  std::size_t max_states = 10000;
  std::optional<std::size_t> loop_unroll;
};

struct ReachEdge {
  std::size_t from = 0;
  std::string transition;
  Binding binding;
  std::size_t to = 0;

  bool operator==(const ReachEdge&) const = default;
};

struct ReachGraph {
  std::vector<Marking> states;  // breadth-first discovery order
  std::vector<ReachEdge> edges;
  std::size_t initial = 0;
  bool truncated = false;
};

ReachGraph reach_graph(const PrTNet& net, const Bounds& bounds = {});

enum class LeafKind { Inner, RoundTrip, Dead, DepthBound };

const char* to_string(LeafKind k) noexcept;

struct TreeVertex {
  std::optional<Firing> firing;  // empty on the root
  Marking marking;
  std::size_t parent = 0;
  std::vector<std::size_t> children;
  std::size_t depth = 0;
  LeafKind kind = LeafKind::Inner;
  std::size_t state = 0;  // index into TestTree::states
};

// Round-trip path tree. Vertices are stored in depth-first preorder; index 0
// is the root. A branch ends when its marking repeats one on its own path,
// when nothing is enabled, or at the depth bound.
struct TestTree {
  std::vector<TreeVertex> vertices;
  // Distinct markings in level-order first appearance; labels m0, m1, ...
  std::vector<Marking> states;
  bool truncated = false;

  // Vertex indices from the first non-root vertex down to `v`.
  std::vector<std::size_t> path_to(std::size_t v) const;
};

TestTree test_tree(const PrTNet& net, const Bounds& bounds = {});

}  // namespace atcg::petri
