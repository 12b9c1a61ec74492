#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>

#include "planact/pddl/types.hpp"

namespace planact::harness {

struct BlocksInstance {
  pddl::Problem problem;
  std::size_t l_gt = 0;
};

/// Random start and goal towers over n blocks named b1..bn. The goal fixes
/// every block's support. L_gt is BFS-optimal for n <= 5 and the length of
/// the planner's validated plan above that. Goal equals init only when
/// `allow_trivial` is set and the draw says so.
BlocksInstance gen_blocksworld(const pddl::Domain& domain, std::size_t n_blocks, std::uint64_t seed,
                               bool allow_trivial = false);

/// Breadth-first optimal plan length, or nothing when the goal is
/// unreachable within `limit` states.
std::optional<std::size_t> bfs_optimal_length(const pddl::Domain& domain, const pddl::Problem& problem,
                                              std::size_t limit = 1'000'000);

/// States reachable from init, by breadth-first search over pddl::apply.
std::set<pddl::FactSet> bfs_reachable(const pddl::Domain& domain, const pddl::Problem& problem,
                                      std::size_t limit = 1'000'000);

}  // namespace planact::harness
