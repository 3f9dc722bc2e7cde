#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "atcg/model.hpp"
#include "atcg/net.hpp"

namespace atcg::netgen {

// One message compiled in isolation: control places around one transition,
// plus the data tokens its arguments need.
struct Node {
  std::string id;  // N<k>
  std::string message_ref;
  std::string operation;
  std::string in_place;   // P<2k-1>
  std::string out_place;  // P<2k>
  std::string transition; // T<k>
  std::string in_arc;     // A<2k-1>
  std::string out_arc;    // A<2k>
  // (data place, token) per argument; the data place is named after the
  // receiving operation's parameter.
  std::vector<std::pair<std::string, Token>> tokens;
  std::vector<std::string> params;  // arc variables, in parameter order
  std::optional<Expr> guard;        // the precondition, when it reads parameters only
  std::optional<std::string> post;  // postcondition text

  bool operator==(const Node&) const = default;
};

enum class Relation { Sequence, FragmentEntry, FragmentExit };

const char* to_string(Relation r) noexcept;

struct Link {
  std::string node;
  Relation relation = Relation::Sequence;

  bool operator==(const Link&) const = default;
};

struct NrtRow {
  std::string node;
  std::vector<Link> predecessors;
  std::vector<Link> successors;

  bool operator==(const NrtRow&) const = default;
};

// Node relationship table.
struct NRT {
  std::vector<NrtRow> rows;  // one per node, node order
  std::vector<std::pair<std::string, std::string>> association_edges;

  const NrtRow* row(const std::string& node) const;
  bool has_link(const std::string& from, const std::string& to, Relation r) const;
};

enum class CfKind { Seq, Fragment, Operand, Leaf };

// Combined fragment tree (also called the combined fragment net). The root
// is an implicit Seq; Fragment vertices own Operand vertices, which own
// leaves and nested fragments.
struct CfVertex {
  CfKind kind = CfKind::Seq;
  std::string node;  // Leaf
  std::string fragment_id;
  model::FragmentOperator op = model::FragmentOperator::Alt;
  std::optional<Expr> guard;  // Operand
  std::optional<std::int64_t> loop_min;
  std::optional<std::int64_t> loop_max;
  std::vector<CfVertex> children;

  bool operator==(const CfVertex&) const = default;
};

struct Options {
  // Budget of extra loop iterations; overrides each loop's loopMax.
  std::optional<std::size_t> loop_unroll;
};

std::vector<Node> build_nodes(const model::SequenceModel& sm, const model::ClassModel& cm);

NRT build_nrt(const std::vector<Node>& nodes, const model::ClassModel& cm,
              const model::SequenceModel& sm);

CfVertex build_cfn(const model::SequenceModel& sm, const std::vector<Node>& nodes, const NRT& nrt);

// Throws Error("unbound-guard-variable") when a guard reads a variable that
// no input arc of its transition can bind.
petri::PrTNet assemble_net(const std::vector<Node>& nodes, const NRT& nrt, const CfVertex& tree,
                           const std::string& model_name, const Options& options = {});

// validate_model + the four stages. Throws Error("invalid-model") carrying the
// report text when validation finds errors.
petri::PrTNet generate(const model::DesignModel& dm, const Options& options = {});

}  // namespace atcg::netgen
