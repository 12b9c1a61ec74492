#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "planact/pddl/types.hpp"

namespace planact::planner::detail {

/// Enumerates total bindings of `params` such that every atom in `atoms` is in
/// the fact index and every parameter conforms to its type. Atoms are joined
/// most-bound first; parameters no atom mentions range over all objects of
/// their type. Bindings arrive in deterministic order.
class Joiner {
 public:
  Joiner(const pddl::Domain& domain, const std::vector<pddl::TypedName>& objects, const pddl::FactSet& facts);

  void for_each(const std::vector<pddl::TypedName>& params, const std::vector<pddl::Atom>& atoms,
                const std::function<void(const std::vector<std::string>&)>& emit);

 private:
  const std::vector<std::string>& objects_for(const std::string& type);
  bool type_ok(const std::string& object, const std::string& type) const;

  const pddl::Domain& domain_;
  std::map<std::string, std::string> object_type_;
  std::map<std::string, std::vector<const pddl::Fact*>> by_predicate_;
  std::map<std::string, std::vector<std::string>> objects_of_type_;
};

}  // namespace planact::planner::detail
