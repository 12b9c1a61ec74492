#include "planact/harness/household.hpp"

#include "planact/common/error.hpp"
#include "planact/world/world.hpp"

namespace planact::harness {

HouseholdTask household_task(const pddl::Domain& domain, const world::Scene& scene,
                             const std::vector<pddl::Literal>& goal, const std::string& name) {
  const world::Projection proj = world::project(scene);
  HouseholdTask t;
  t.problem.name = name;
  t.problem.domain_name = domain.name;
  t.problem.objects = proj.objects;
  t.problem.init = proj.facts;
  for (const pddl::Literal& l : goal) {
    for (const std::string& a : l.atom.args) {
      if (!t.problem.object_type(a)) throw UnknownObject(a + " in goal of " + name);
    }
    t.problem.goal.push_back(l);
  }
  for (const pddl::TypedName& o : proj.objects) {
    planner::Value v{o.type, std::nullopt, false};
    if (auto it = proj.values.find(o.name); it != proj.values.end()) v.geom = it->second;
    t.values[o.name] = v;
  }
  return t;
}

}  // namespace planact::harness
