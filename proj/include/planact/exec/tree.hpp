#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "planact/world/world.hpp"

namespace planact::exec {

enum class NodeType { Sequence, Fallback, Condition, Sampler, Action };

const char* to_string(NodeType t);

/// One behavior-tree node. Every string argument names a blackboard slot.
///
/// Condition: `predicate` over `args`, optionally `negated`. On success it
/// writes the verified value to `out` when that is non-empty (the observed
/// pose for detected, the pose for supported, the trajectory for kin).
/// Sampler: draws from a `sampler` kind cursor over `inputs` into `outputs`,
/// at most `budget` values per cursor.
/// Action: one world command of `action` kind over `params`.
struct Node {
  NodeType type = NodeType::Sequence;
  std::vector<Node> children;

  std::string predicate;
  std::vector<std::string> args;
  bool negated = false;
  std::string out;

  std::string sampler;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::size_t budget = 0;

  world::CommandKind action = world::CommandKind::MoveBase;
  std::vector<std::string> params;
  std::string toggle;

  bool operator==(const Node&) const = default;

  static Node sequence(std::vector<Node> children);
  static Node fallback(std::vector<Node> children);
  static Node condition(std::string predicate, std::vector<std::string> args, std::string out = "",
                        bool negated = false);
  static Node sampler_node(std::string kind, std::vector<std::string> inputs, std::vector<std::string> outputs,
                           std::size_t budget);
  static Node action_node(world::CommandKind kind, std::vector<std::string> params, std::string toggle = "");
};

enum class TreeStatus { Idle, Running, Succeeded, Failed };

const char* to_string(TreeStatus s);

struct CSubBT {
  /// Combined action name, e.g. "move-and-pick".
  std::string name;
  std::string template_id;
  /// Plan bindings: slot -> symbol.
  std::map<std::string, std::string> bindings;
  Node root;
  TreeStatus status = TreeStatus::Idle;

  bool operator==(const CSubBT&) const = default;
};

std::size_t node_count(const Node& n);

/// Canonical XML: fixed element order, attributes sorted by name, two-space
/// indentation, trailing newline.
std::string serialize_node(const Node& n);
std::string serialize_tree(const CSubBT& t);

/// Throws MalformedXml on unparsable input and UnknownNodeTag on elements
/// outside the schema. The status of a parsed tree is Idle.
Node deserialize_node(std::string_view xml);
CSubBT deserialize_tree(std::string_view xml);

}  // namespace planact::exec
