#pragma once

#include <string>
#include <vector>

#include "planact/common/text.hpp"
#include "planact/pddl/parser.hpp"
#include "planact/world/scene.hpp"

namespace fixtures {

inline const planact::pddl::Domain& household() {
  static const planact::pddl::Domain d =
      planact::pddl::parse_domain(planact::read_file(planact::data_path("domains/household.pddl")));
  return d;
}

inline const std::vector<planact::pddl::StreamSpec>& household_streams() {
  static const std::vector<planact::pddl::StreamSpec> s = planact::pddl::parse_streams(
      planact::read_file(planact::data_path("domains/household_streams.pddl")), household());
  return s;
}

inline const planact::pddl::Domain& blocks() {
  static const planact::pddl::Domain d =
      planact::pddl::parse_domain(planact::read_file(planact::data_path("domains/blocksworld.pddl")));
  return d;
}

inline planact::world::Scene kitchen() { return planact::world::load_scene(planact::data_path("scenes/kitchen.json")); }

inline planact::world::Scene two_tables() {
  return planact::world::load_scene(planact::data_path("scenes/two_tables_four_drawers.json"));
}

inline std::string scenario_path(const std::string& id) { return planact::data_path("scenarios/" + id + ".json"); }

}  // namespace fixtures
