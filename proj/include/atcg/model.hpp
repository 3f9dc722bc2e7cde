#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "atcg/atom.hpp"
#include "atcg/error.hpp"
#include "atcg/expr.hpp"

namespace atcg::model {

struct TypedName {
  std::string name;
  std::string type_name;  // opaque; no type system is applied

  bool operator==(const TypedName&) const = default;
};

struct OperationDef {
  std::string name;
  std::vector<TypedName> params;
  std::optional<Expr> pre;
  std::optional<Expr> post;

  bool operator==(const OperationDef&) const = default;
};

struct ClassDef {
  std::string name;
  std::vector<TypedName> attributes;
  std::vector<OperationDef> operations;

  const OperationDef* find_operation(const std::string& op) const;
  bool operator==(const ClassDef&) const = default;
};

struct Association {
  std::string from;
  std::string to;
  std::optional<std::string> label;

  bool operator==(const Association&) const = default;
};

struct ClassModel {
  std::vector<ClassDef> classes;
  std::vector<Association> associations;

  const ClassDef* find_class(const std::string& name) const;
  bool associated(const std::string& a, const std::string& b) const;
  bool operator==(const ClassModel&) const = default;
};

struct Lifeline {
  std::string id;
  std::string display_name;
  std::string class_name;

  bool operator==(const Lifeline&) const = default;
};

struct Message {
  std::string id;
  std::string from;  // lifeline id
  std::string to;    // lifeline id
  std::string operation;
  std::vector<Atom> args;

  bool operator==(const Message&) const = default;
};

enum class FragmentOperator { Alt, Opt, Loop, Break, Par };

const char* to_string(FragmentOperator op) noexcept;
std::optional<FragmentOperator> parse_fragment_operator(const std::string& s);

struct SeqElement;

struct Operand {
  std::optional<Expr> guard;  // absent = else operand
  std::vector<SeqElement> body;

  bool operator==(const Operand&) const;
};

struct CombinedFragment {
  std::string id;
  FragmentOperator op = FragmentOperator::Alt;
  std::vector<Operand> operands;
  std::optional<std::int64_t> loop_min;
  std::optional<std::int64_t> loop_max;

  bool operator==(const CombinedFragment&) const;
};

struct SeqElement {
  std::variant<Message, CombinedFragment> value;

  const Message* message() const { return std::get_if<Message>(&value); }
  const CombinedFragment* fragment() const { return std::get_if<CombinedFragment>(&value); }

  bool operator==(const SeqElement&) const = default;
};

struct SequenceModel {
  std::string name;
  std::vector<Lifeline> lifelines;
  std::vector<SeqElement> body;

  const Lifeline* find_lifeline(const std::string& id) const;
  bool operator==(const SequenceModel&) const = default;
};

struct DesignModel {
  std::string name;
  ClassModel classes;
  SequenceModel sequence;

  bool operator==(const DesignModel&) const = default;
};

// Messages in body order, descending into fragments (operand order).
std::vector<const Message*> messages_in_order(const SequenceModel& sm);

// Reports every violated structural invariant of the two models. Messages
// between lifelines whose classes are distinct and share no association are
// reported as "unassociated-message" warnings. Operand guards may only read
// parameters that some message of the sequence passes.
ValidationReport validate_model(const ClassModel& cm, const SequenceModel& sm);

}  // namespace atcg::model
