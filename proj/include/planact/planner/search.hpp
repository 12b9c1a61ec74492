#pragma once

#include <cstddef>
#include <optional>
#include <set>

#include "planact/planner/task.hpp"

namespace planact::planner {

struct SearchStats {
  std::size_t expanded = 0;
  std::size_t generated = 0;
};

/// Greedy best-first search on the goal-count heuristic. Open-list ties break
/// on path cost, then insertion order; successors are generated in the task's
/// (name, args) action order, so identical tasks give identical plans.
/// nullopt when every reachable state has been expanded.
std::optional<pddl::Plan> search(const GroundTask& task, SearchStats* stats = nullptr,
                                 std::size_t max_expansions = 2'000'000);

/// Like search(), but throws NoPlan.
pddl::Plan plan(const GroundTask& task, SearchStats* stats = nullptr);

/// Every state reachable from the task's init under its ground actions.
/// Stops after `limit` states.
std::set<pddl::FactSet> reachable_states(const GroundTask& task, std::size_t limit = 100'000);

}  // namespace planact::planner
