#include "planact/flp/engine.hpp"

#include <memory>

#include "planact/common/error.hpp"
#include "planact/common/random.hpp"
#include "planact/harness/household.hpp"

namespace planact::flp {

Engine::Engine(const pddl::Domain& domain, const std::vector<pddl::StreamSpec>& streams, world::World& world,
               EngineOptions options)
    : domain_(domain),
      streams_(streams),
      world_(world),
      options_(std::move(options)),
      executor_(domain, world, options_.exec, &stats_) {}

pddl::Problem Engine::current_problem() const {
  return harness::household_task(domain_, world_.scene(), {}, "current").problem;
}

Engine::Attempt Engine::pursue(const std::vector<pddl::Literal>& goal, pddl::PlanProvenance provenance,
                               const pddl::FactSet& persistent) {
  Attempt out;
  const std::string name = provenance == pddl::PlanProvenance::Repair ? "repair" : "task";
  try {
    harness::HouseholdTask task = harness::household_task(domain_, world_.scene(), goal, name);
    task.problem.init.insert(persistent.begin(), persistent.end());
    const geom::SamplerRegistry samplers =
        geom::make_registry(std::make_shared<const geom::SceneGeometry>(world_.scene().geometry()));
    planner::PlanResult r = planner::plan_with_streams(domain_, task.problem, streams_, samplers, options_.policy,
                                                       task.values, hash_combine(options_.seed, plans_.size()),
                                                       &stats_);
    r.plan.provenance = provenance;
    out.plan = r.plan;
    out.planned = true;
    plans_.push_back(r.plan);
    executor_.sync_belief();
    out.run = executor_.execute_plan(r.plan, r.values);
    path_length_ += out.run.executed;
    xml_.insert(xml_.end(), out.run.xml.begin(), out.run.xml.end());
  } catch (const NoPlan& e) {
    out.error = e.what();
  } catch (const LevelBudgetExhausted& e) {
    out.error = e.what();
  }
  return out;
}

bool Engine::satisfied(const std::vector<pddl::Literal>& goal) const {
  const pddl::FactSet state = world::ground_truth_state(world_.scene());
  for (const pddl::Literal& l : goal) {
    if ((state.count(l.atom) != 0) != l.positive) return false;
  }
  return true;
}

StateSummary Engine::belief_summary() const {
  const world::Projection p = world::project(executor_.belief());
  StateSummary s;
  for (const pddl::TypedName& o : p.objects) {
    if (!pddl::is_geometric(domain_.tag_of_type(o.type))) s.objects.push_back(o);
  }
  for (const pddl::Fact& f : p.facts) {
    if (domain_.is_logical(f.predicate)) s.facts.insert(f);
  }
  return s;
}

}  // namespace planact::flp
