#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace planact::pddl {

/// Semantic role of a parameter type. Geometric tags mark parameters that
/// carry stream-sampled values; the rest are purely symbolic.
enum class SemanticTag { Arm, Object, Pose, Grasp, Config, Trajectory, Region, Plain };

const char* to_string(SemanticTag tag);
bool is_geometric(SemanticTag tag);

enum class LiteralKind { Fluent, Static, UnaryType };

const char* to_string(LiteralKind kind);

struct TypedName {
  std::string name;  // "?x" for variables, bare identifier for constants
  std::string type = "object";

  auto operator<=>(const TypedName&) const = default;
};

struct TypeDecl {
  std::string name;
  std::string parent = "object";

  auto operator<=>(const TypeDecl&) const = default;
};

struct Predicate {
  std::string name;
  std::vector<TypedName> params;
  std::vector<SemanticTag> tags;  // one per param
  LiteralKind kind = LiteralKind::Static;

  std::size_t arity() const { return params.size(); }
  bool operator==(const Predicate&) const = default;
};

/// Predicate applied to terms. Terms beginning with '?' are variables.
struct Atom {
  std::string predicate;
  std::vector<std::string> args;

  auto operator<=>(const Atom&) const = default;
};

struct Literal {
  Atom atom;
  bool positive = true;

  auto operator<=>(const Literal&) const = default;
};

/// A ground atom. States are sets of facts; absence means false.
using Fact = Atom;
using FactSet = std::set<Fact>;

std::string to_string(const Atom& atom);
std::string to_string(const Literal& literal);
bool is_variable(const std::string& term);

struct ActionSchema {
  std::string name;
  std::vector<TypedName> params;
  std::vector<Atom> pre_plus;    // fluent, positive
  std::vector<Atom> pre_minus;   // fluent, negative
  std::vector<Atom> static_pre;  // static or unary-type, positive
  std::vector<Atom> eff_plus;
  std::vector<Atom> eff_minus;
  std::string description;       // from a "; @description" annotation

  bool operator==(const ActionSchema&) const = default;
};

struct Domain {
  std::string name;
  std::vector<std::string> requirements;
  std::vector<TypeDecl> types;
  std::vector<TypedName> constants;
  std::vector<Predicate> predicates;
  std::vector<ActionSchema> actions;
  /// Fluent predicates without geometric parameters: the goal vocabulary.
  std::vector<std::string> logical_predicates;

  bool operator==(const Domain&) const = default;

  const Predicate* find_predicate(const std::string& name) const;
  const ActionSchema* find_action(const std::string& name) const;
  bool is_logical(const std::string& predicate) const;
  bool is_fluent(const std::string& predicate) const;
  /// True if `type` equals `ancestor` or derives from it.
  bool is_subtype(const std::string& type, const std::string& ancestor) const;
  SemanticTag tag_of_type(const std::string& type) const;
};

struct Problem {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;
  FactSet init;
  std::vector<Literal> goal;

  bool operator==(const Problem&) const = default;

  std::optional<std::string> object_type(const std::string& name) const;
};

struct StreamSpec {
  std::string name;
  std::vector<TypedName> inputs;
  std::vector<Atom> domain_literals;
  std::vector<TypedName> outputs;
  std::vector<Atom> certified;

  bool operator==(const StreamSpec&) const = default;
};

struct GroundAction {
  std::string schema;
  std::vector<std::string> args;
  FactSet pre_plus;
  FactSet pre_minus;
  FactSet static_pre;
  FactSet eff_plus;
  FactSet eff_minus;

  std::string to_string() const;  // "(name a b c)"
  bool operator==(const GroundAction&) const = default;
};

enum class PlanProvenance { Initial, Repair };

struct Plan {
  std::vector<GroundAction> steps;
  PlanProvenance provenance = PlanProvenance::Initial;
};

}  // namespace planact::pddl
