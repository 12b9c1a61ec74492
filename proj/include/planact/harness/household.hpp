#pragma once

#include <string>
#include <vector>

#include "planact/planner/task.hpp"
#include "planact/world/scene.hpp"

namespace planact::harness {

struct HouseholdTask {
  pddl::Problem problem;
  planner::ValueMap values;
};

/// Problem whose objects and init are the scene's symbolic projection.
/// Goal literals must mention projected objects only (UnknownObject).
HouseholdTask household_task(const pddl::Domain& domain, const world::Scene& scene,
                             const std::vector<pddl::Literal>& goal, const std::string& name = "task");

}  // namespace planact::harness
