#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "planact/pddl/types.hpp"

namespace planact::flp {

struct GoalSet {
  /// Sorted, duplicate-free positive literals.
  std::vector<pddl::Literal> literals;
  std::string source = "llm";
  std::size_t attempt = 0;

  bool operator==(const GoalSet& o) const { return literals == o.literals; }
};

/// Body of the last complete ``` fenced block, without the info string.
std::optional<std::string> last_fenced_block(const std::string& text);

/// Parses the `(:goal ...)` form in the last fenced block and validates it
/// against the domain's logical predicates and the problem's objects.
/// Throws NoBlockFound, SyntaxError, UnknownPredicate (also for a wrong
/// arity), UnknownObject or EmptyGoal.
GoalSet extract_goals(const std::string& answer, const pddl::Domain& domain, const pddl::Problem& problem);

}  // namespace planact::flp
