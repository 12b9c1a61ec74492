#include "planact/harness/scenario.hpp"

#include "planact/common/error.hpp"
#include "planact/common/text.hpp"
#include "planact/flp/engine.hpp"
#include "planact/flp/replan.hpp"
#include "planact/harness/household.hpp"
#include "planact/pddl/parser.hpp"
#include "planact/pddl/printer.hpp"
#include "planact/planner/planner.hpp"
#include "planact/world/scene.hpp"

namespace planact::harness {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct Loaded {
  pddl::Domain domain;
  std::vector<pddl::StreamSpec> streams;
  world::Scene scene;
};

Loaded load(const Scenario& sc) {
  Loaded l;
  l.domain = pddl::parse_domain(read_file(sc.domain_path));
  l.streams = pddl::parse_streams(read_file(sc.streams_path), l.domain);
  l.scene = world::load_scene(sc.scene_path);
  return l;
}

planner::DeferralPolicy policy_for(const pddl::Domain& domain, const RunOptions& options) {
  planner::DeferralPolicy policy = planner::default_deferral(domain);
  if (options.defer) {
    policy.deferred.clear();
    for (const std::string& p : *options.defer) {
      if (p != "none") policy.deferred.insert(p);
    }
    planner::check_policy(domain, policy);
  }
  return policy;
}

}  // namespace

Scenario parse_scenario(const json& j, const std::string& base_file) {
  Scenario sc;
  try {
    sc.id = j.at("id").get<std::string>();
    sc.family = j.value("family", "");
    sc.domain_path = resolve_relative(base_file, j.at("domain").get<std::string>());
    sc.streams_path = resolve_relative(base_file, j.at("streams").get<std::string>());
    sc.scene_path = resolve_relative(base_file, j.at("scene").get<std::string>());
    sc.goal = pddl::parse_conjunction(j.at("goal").get<std::string>());
    for (const json& e : j.value("events", json::array())) sc.events.push_back(world::parse_event(e));
    sc.llm = j.value("llm", json::object());
    sc.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("l_gt")) sc.l_gt = j.at("l_gt").get<double>();
    sc.max_llm_calls = j.value("max_llm_calls", std::size_t{5});
  } catch (const json::exception& e) {
    throw SchemaError(std::string("scenario: ") + e.what());
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  try {
    return parse_scenario(json::parse(read_file(path)), path);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

std::unique_ptr<flp::LLMBackend> scripted_backend(const Scenario& sc) {
  json script = sc.llm;
  script["scenario"] = sc.id;
  return std::make_unique<flp::ScriptedBackend>(flp::ScriptedBackend::from_json(script));
}

ordered_json result_to_json(const ScenarioResult& r) {
  ordered_json j;
  j["id"] = r.id;
  j["success"] = r.success;
  j["steps"] = r.steps;
  j["llm_calls"] = r.llm_calls;
  j["plans"] = r.plans;
  j["failure"] = r.failure;
  j["fired_events"] = r.fired_events;
  j["repair_goals"] = ordered_json::array();
  for (const auto& g : r.repair_goals) j["repair_goals"].push_back(pddl::print_conjunction(g));
  j["transcript"] = ordered_json::array();
  for (const flp::TranscriptEntry& e : r.transcript) j["transcript"].push_back(flp::entry_to_json(e));
  return j;
}

ScenarioResult run_scenario(const Scenario& sc, flp::LLMBackend& backend, const RunOptions& options) {
  const Loaded l = load(sc);
  const std::uint64_t seed = options.seed.value_or(sc.seed);
  world::World world(l.scene, sc.events, seed);
  flp::EngineOptions eo;
  eo.policy = policy_for(l.domain, options);
  eo.seed = seed;
  eo.exec.seed = seed;
  flp::Engine engine(l.domain, l.streams, world, eo);

  ScenarioResult r;
  r.id = sc.id;
  flp::ReplanState state;
  state.original_goal = sc.goal;
  try {
    const flp::Engine::Attempt first = engine.pursue(sc.goal, pddl::PlanProvenance::Initial);
    if (!first.planned) throw TaskFailed("no initial plan: " + first.error);
    if (!first.run.success) {
      flp::ReplanOptions ro;
      ro.max_llm_calls = options.max_llm_calls.value_or(sc.max_llm_calls);
      flp::replan_cycle(engine, *first.run.report, backend, state, ro);
    }
  } catch (const TaskFailed& e) {
    r.failure = e.what();
  } catch (const Error& e) {
    r.failure = e.what();
  }
  // Success is judged on ground truth only.
  r.success = engine.satisfied(sc.goal);
  if (r.success) r.failure.clear();
  r.steps = engine.path_length();
  r.llm_calls = state.llm_calls_used;
  r.plans = engine.plans().size();
  r.fired_events = world.fired_events();
  for (const flp::GoalSet& g : state.history) r.repair_goals.push_back(g.literals);
  r.transcript = backend.transcript();
  r.xml = engine.xml();
  r.trace = engine.executor().trace();
  return r;
}

std::size_t ground_truth_length(const Scenario& sc) {
  Loaded l = load(sc);
  for (const world::AnomalyEvent& e : sc.events) world::apply_event(l.scene, e, sc.seed);
  const HouseholdTask task = household_task(l.domain, l.scene, sc.goal, sc.id);
  const geom::SamplerRegistry samplers =
      geom::make_registry(std::make_shared<const geom::SceneGeometry>(l.scene.geometry()));
  const planner::PlanResult r = planner::plan_with_streams(l.domain, task.problem, l.streams, samplers,
                                                           planner::default_deferral(l.domain), task.values, sc.seed);
  return planner::combine_actions(r.plan).size();
}

}  // namespace planact::harness
