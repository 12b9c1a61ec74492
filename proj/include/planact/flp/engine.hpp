#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "planact/exec/executor.hpp"
#include "planact/flp/prompts.hpp"
#include "planact/planner/planner.hpp"
#include "planact/world/world.hpp"

namespace planact::flp {

struct EngineOptions {
  planner::DeferralPolicy policy;
  std::uint64_t seed = 0;
  exec::ExecOptions exec;
};

/// Plans against the world's current symbolic projection and executes the
/// result as CSubBTs.
class Engine {
 public:
  struct Attempt {
    bool planned = false;
    std::string error;
    pddl::Plan plan;
    exec::PlanRun run;
  };

  Engine(const pddl::Domain& domain, const std::vector<pddl::StreamSpec>& streams, world::World& world,
         EngineOptions options);

  /// Plans to `goal` from the current projection plus `persistent` facts and
  /// executes the plan. Planning failures are reported, not thrown.
  Attempt pursue(const std::vector<pddl::Literal>& goal, pddl::PlanProvenance provenance,
                 const pddl::FactSet& persistent = {});

  /// Goal check against ground truth.
  bool satisfied(const std::vector<pddl::Literal>& goal) const;
  /// Nameable objects and logical facts of the executor's belief.
  StateSummary belief_summary() const;
  /// Problem over the current projection (objects for goal validation).
  pddl::Problem current_problem() const;

  const pddl::Domain& domain() const { return domain_; }
  world::World& world() { return world_; }
  const world::Scene& world_scene() const { return world_.scene(); }
  exec::Executor& executor() { return executor_; }
  const planner::SamplerStats& stats() const { return stats_; }
  /// CombinedActions started across every executed plan.
  std::size_t path_length() const { return path_length_; }
  const std::vector<pddl::Plan>& plans() const { return plans_; }
  const std::vector<std::string>& xml() const { return xml_; }

 private:
  const pddl::Domain& domain_;
  const std::vector<pddl::StreamSpec>& streams_;
  world::World& world_;
  EngineOptions options_;
  planner::SamplerStats stats_;
  exec::Executor executor_;
  std::size_t path_length_ = 0;
  std::vector<pddl::Plan> plans_;
  std::vector<std::string> xml_;
};

}  // namespace planact::flp
