#include "planact/pddl/types.hpp"

#include <algorithm>
#include <map>

namespace planact::pddl {

const char* to_string(SemanticTag tag) {
  switch (tag) {
    case SemanticTag::Arm: return "arm";
    case SemanticTag::Object: return "object";
    case SemanticTag::Pose: return "pose";
    case SemanticTag::Grasp: return "grasp";
    case SemanticTag::Config: return "config";
    case SemanticTag::Trajectory: return "trajectory";
    case SemanticTag::Region: return "region";
    case SemanticTag::Plain: return "plain";
  }
  return "plain";
}

bool is_geometric(SemanticTag tag) {
  return tag == SemanticTag::Pose || tag == SemanticTag::Grasp || tag == SemanticTag::Config ||
         tag == SemanticTag::Trajectory;
}

const char* to_string(LiteralKind kind) {
  switch (kind) {
    case LiteralKind::Fluent: return "fluent";
    case LiteralKind::Static: return "static";
    case LiteralKind::UnaryType: return "unary-type";
  }
  return "static";
}

bool is_variable(const std::string& term) { return !term.empty() && term.front() == '?'; }

std::string to_string(const Atom& atom) {
  std::string out = "(" + atom.predicate;
  for (const std::string& a : atom.args) out += " " + a;
  return out + ")";
}

std::string to_string(const Literal& literal) {
  return literal.positive ? to_string(literal.atom) : "(not " + to_string(literal.atom) + ")";
}

std::string GroundAction::to_string() const {
  std::string out = "(" + schema;
  for (const std::string& a : args) out += " " + a;
  return out + ")";
}

const Predicate* Domain::find_predicate(const std::string& n) const {
  for (const Predicate& p : predicates) {
    if (p.name == n) return &p;
  }
  return nullptr;
}

const ActionSchema* Domain::find_action(const std::string& n) const {
  for (const ActionSchema& a : actions) {
    if (a.name == n) return &a;
  }
  return nullptr;
}

bool Domain::is_logical(const std::string& predicate) const {
  return std::find(logical_predicates.begin(), logical_predicates.end(), predicate) !=
         logical_predicates.end();
}

bool Domain::is_fluent(const std::string& predicate) const {
  const Predicate* p = find_predicate(predicate);
  return p != nullptr && p->kind == LiteralKind::Fluent;
}

bool Domain::is_subtype(const std::string& type, const std::string& ancestor) const {
  if (ancestor == "object") return true;
  std::string current = type;
  for (std::size_t guard = 0; guard <= types.size(); ++guard) {
    if (current == ancestor) return true;
    auto it = std::find_if(types.begin(), types.end(), [&](const TypeDecl& t) { return t.name == current; });
    if (it == types.end()) return false;
    current = it->parent;
  }
  return false;
}

SemanticTag Domain::tag_of_type(const std::string& type) const {
  static const std::map<std::string, SemanticTag> kNamed = {
      {"arm", SemanticTag::Arm},           {"item", SemanticTag::Object},
      {"movable", SemanticTag::Object},    {"obj", SemanticTag::Object},
      {"pose", SemanticTag::Pose},         {"grasp", SemanticTag::Grasp},
      {"conf", SemanticTag::Config},       {"config", SemanticTag::Config},
      {"configuration", SemanticTag::Config}, {"traj", SemanticTag::Trajectory},
      {"trajectory", SemanticTag::Trajectory}, {"region", SemanticTag::Region},
      {"location", SemanticTag::Region},   {"surface", SemanticTag::Region},
  };
  std::string current = type;
  for (std::size_t guard = 0; guard <= types.size(); ++guard) {
    if (auto it = kNamed.find(current); it != kNamed.end()) return it->second;
    auto t = std::find_if(types.begin(), types.end(), [&](const TypeDecl& d) { return d.name == current; });
    if (t == types.end()) break;
    current = t->parent;
  }
  return SemanticTag::Plain;
}

std::optional<std::string> Problem::object_type(const std::string& n) const {
  for (const TypedName& o : objects) {
    if (o.name == n) return o.type;
  }
  return std::nullopt;
}

}  // namespace planact::pddl
