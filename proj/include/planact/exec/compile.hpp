#pragma once

#include <string>
#include <vector>

#include "planact/exec/tree.hpp"
#include "planact/geom/scene.hpp"
#include "planact/planner/planner.hpp"

namespace planact::exec {

/// Template ids with a compiler: move, pick, place, move-and-pick,
/// move-and-place, scan, toggle-state.
const std::vector<std::string>& template_ids();

/// Builds the subtree for a combined action. Slots are named
/// "<action>.<param>" after the constituents' parameters; "robot.q" holds the
/// localized base conf. Sampler budgets come from `caps`.
/// Throws NoTemplate for actions outside the template library.
CSubBT compile(const planner::CombinedAction& action, const pddl::Domain& domain,
               const geom::SamplerCapacities& caps = {});

}  // namespace planact::exec
