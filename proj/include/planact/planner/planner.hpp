#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "planact/geom/samplers.hpp"
#include "planact/planner/search.hpp"
#include "planact/planner/streams.hpp"
#include "planact/planner/task.hpp"

namespace planact::planner {

struct PlanResult {
  pddl::Plan plan;
  GroundTask task;  // the task the plan was found in
  ValueMap values;
  StreamOutcome streams;
  SearchStats search;
};

/// Searches with the init statics alone, then after each stream level until
/// a plan is found or policy.max_level levels have run.
/// Throws LevelBudgetExhausted when a level adds nothing and the goal is
/// relaxed-unreachable, NoPlan when the levels run out.
PlanResult plan_with_streams(const pddl::Domain& domain, const pddl::Problem& problem,
                             const std::vector<pddl::StreamSpec>& streams, const geom::SamplerRegistry& samplers,
                             const DeferralPolicy& policy, ValueMap values = {}, std::uint64_t seed = 0,
                             SamplerStats* stats = nullptr);

struct CombinedAction {
  std::string name;
  std::vector<pddl::GroundAction> constituents;
  std::string template_id;

  std::string to_string() const;
};

/// Merges adjacent (move, pick) and (move, place) pairs left to right.
std::vector<CombinedAction> combine_actions(const pddl::Plan& plan);

/// Sequential application of the constituents' effects.
pddl::FactSet apply_combined(const CombinedAction& action, const pddl::FactSet& state);

/// {"provenance", "steps": [{"action", "args"}], "values": {symbol: geometry or "optimistic"}}.
/// With `task`, also the typed objects the steps mention and the certified
/// and assumed static facts they rely on.
nlohmann::ordered_json plan_to_json(const pddl::Plan& plan, const ValueMap& values,
                                    const GroundTask* task = nullptr);

/// What a stream plan needs beyond the problem file to be checked.
struct PlanSupport {
  std::vector<pddl::TypedName> objects;
  pddl::FactSet certified;
  pddl::FactSet assumed;
};

PlanSupport plan_support_from_json(const nlohmann::json& j);

/// Regrounds each step against `domain`. Symbols with geometry are added to
/// `values` when given.
pddl::Plan plan_from_json(const nlohmann::json& j, const pddl::Domain& domain, ValueMap* values = nullptr);

}  // namespace planact::planner
