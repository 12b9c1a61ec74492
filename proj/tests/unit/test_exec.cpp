#include <doctest.h>

#include "../support/gen.hpp"
#include "fixtures.hpp"
#include "golden.hpp"
#include "planact/common/error.hpp"
#include "planact/exec/executor.hpp"
#include "planact/harness/household.hpp"
#include "planact/pddl/parser.hpp"

using namespace planact;
using namespace planact::exec;

namespace {

struct Planned {
  world::Scene scene;
  planner::PlanResult result;
};

Planned plan_kitchen(const char* goal, std::uint64_t seed, world::Scene scene = fixtures::kitchen()) {
  const auto task = harness::household_task(fixtures::household(), scene, pddl::parse_conjunction(goal));
  const auto registry = geom::make_registry(std::make_shared<geom::SceneGeometry>(scene.geometry()));
  auto r = planner::plan_with_streams(fixtures::household(), task.problem, fixtures::household_streams(), registry,
                                      planner::default_deferral(fixtures::household()), task.values, seed);
  return {std::move(scene), std::move(r)};
}

void collect(const Node& n, NodeType type, std::vector<const Node*>& out) {
  if (n.type == type) out.push_back(&n);
  for (const Node& c : n.children) collect(c, type, out);
}

world::AnomalyEvent move_cube_away() {
  return world::parse_event(nlohmann::json::parse(R"({"id": "gone", "trigger": {"step": 1},
      "effect": {"type": "move_object", "object": "cube1", "region": "table2"}})"));
}

}  // namespace

TEST_SUITE("exec") {
  TEST_CASE("move-and-pick compiles to the expected shape") {
    const Planned p = plan_kitchen("(and (holding arm cube1))", 1);
    const auto combined = planner::combine_actions(p.result.plan);
    REQUIRE(combined.size() == 1);
    geom::SamplerCapacities caps;
    caps.ik = 5;
    const CSubBT tree = compile(combined[0], fixtures::household(), caps);
    CHECK(tree.name == "move-and-pick");
    CHECK(tree.template_id == "move-and-pick");
    CHECK(tree.status == TreeStatus::Idle);

    std::set<std::string> symbols;
    for (const auto& step : combined[0].constituents) symbols.insert(step.args.begin(), step.args.end());
    for (const auto& [slot, symbol] : tree.bindings) {
      CHECK(slot.find('.') != std::string::npos);
      CHECK(symbols.count(symbol) == 1);
    }

    std::vector<const Node*> actions;
    collect(tree.root, NodeType::Action, actions);
    std::vector<world::CommandKind> kinds;
    for (const Node* a : actions) kinds.push_back(a->action);
    const auto move = std::find(kinds.begin(), kinds.end(), world::CommandKind::MoveBase);
    const auto grasp = std::find(kinds.begin(), kinds.end(), world::CommandKind::Grasp);
    REQUIRE(move != kinds.end());
    REQUIRE(grasp != kinds.end());
    CHECK(move < grasp);

    std::vector<const Node*> samplers;
    collect(tree.root, NodeType::Sampler, samplers);
    bool saw_ik = false;
    for (const Node* s : samplers) {
      CHECK(s->budget > 0);
      if (s->sampler == "ik") {
        saw_ik = true;
        CHECK(s->budget == 5);
      }
    }
    CHECK(saw_ik);
  }

  TEST_CASE("compiled tree matches the golden document") {
    const Planned p = plan_kitchen("(and (on cube1 tray))", 1);
    const auto combined = planner::combine_actions(p.result.plan);
    REQUIRE(combined.size() == 2);
    golden::check("move_and_pick.xml", serialize_tree(compile(combined[0], fixtures::household())));
    golden::check("move_and_place.xml", serialize_tree(compile(combined[1], fixtures::household())));
  }

  TEST_CASE("actions outside the template library") {
    pddl::GroundAction stack{.schema = "stack", .args = {"a", "b"}};
    const planner::CombinedAction c{"stack", {stack}, ""};
    CHECK_THROWS_AS(compile(c, fixtures::blocks()), NoTemplate);
  }

  TEST_CASE("xml errors") {
    CHECK_THROWS_AS(deserialize_tree("<csubbt name=\"x\"><sequence>"), MalformedXml);
    CHECK_THROWS_AS(deserialize_tree(""), MalformedXml);
    const Planned p = plan_kitchen("(and (holding arm cube1))", 1);
    std::string xml = serialize_tree(compile(planner::combine_actions(p.result.plan)[0], fixtures::household()));
    const auto at = xml.find("<Sequence");
    REQUIRE(at != std::string::npos);
    xml.replace(at, 9, "<Teleport");
    const auto close = xml.rfind("</Sequence>");
    REQUIRE(close != std::string::npos);
    xml.replace(close, 11, "</Teleport>");
    CHECK_THROWS_AS(deserialize_tree(xml), UnknownNodeTag);
  }

  TEST_CASE("property: xml round-trip over random trees") {
    Rng rng(21);
    for (int i = 0; i < 60; ++i) {
      const CSubBT t = testgen::random_tree(rng);
      const std::string xml = serialize_tree(t);
      const CSubBT back = deserialize_tree(xml);
      CHECK(back == t);
      CHECK(serialize_tree(back) == xml);
      CHECK(node_count(back.root) == node_count(t.root));
    }
  }

  TEST_CASE("nominal move-and-pick succeeds") {
    const Planned p = plan_kitchen("(and (holding arm cube1))", 1);
    world::World w(p.scene, {}, 1);
    planner::SamplerStats stats;
    Executor ex(fixtures::household(), w, {.seed = 1}, &stats);
    const PlanRun run = ex.execute_plan(p.result.plan, p.result.values);
    CHECK(run.success);
    CHECK_FALSE(run.report);
    CHECK(run.executed == 1);
    CHECK(run.xml.size() == 1);
    CHECK(w.scene().robot.holding == "cube1");
    CHECK(stats.exec_phase > 0);
    CHECK(stats.plan_phase == 0);
  }

  TEST_CASE("lost object yields a report after exhausting the feeding samplers") {
    const Planned p = plan_kitchen("(and (on cube1 tray))", 1);
    world::World w(p.scene, {move_cube_away()}, 1);
    Executor ex(fixtures::household(), w, {.seed = 1});
    const PlanRun run = ex.execute_plan(p.result.plan, p.result.values);
    CHECK_FALSE(run.success);
    REQUIRE(run.report);
    const AnomalyReport& r = *run.report;
    CHECK(r.failed_action == "move-and-pick");
    CHECK(r.unsatisfied_constraint == pddl::Literal{{"on", {"cube1", "table1"}}, true});
    const geom::SamplerCapacities caps;
    CHECK(r.explored == std::map<std::string, std::size_t>{{"base_motion", caps.base_motion}, {"view_conf", caps.view}});
    CHECK(std::is_sorted(r.observed_facts.begin(), r.observed_facts.end()));
    CHECK(std::find(r.observed_facts.begin(), r.observed_facts.end(), "(scanned table1)") != r.observed_facts.end());
    CHECK(r.snapshot_id == w.snapshot_id());
    CHECK(r.step == w.steps());
    CHECK(w.scene().robot.holding.empty());
  }

  TEST_CASE("arrival noise is absorbed by sampling from the localized base") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      CAPTURE(seed);
      const Planned p = plan_kitchen("(and (holding arm cube1))", seed);
      world::World w(p.scene, {}, seed);
      planner::SamplerStats stats;
      Executor ex(fixtures::household(), w, {.seed = seed}, &stats);
      const PlanRun run = ex.execute_plan(p.result.plan, p.result.values);
      CHECK(run.success);
      CHECK_FALSE(run.report);
      CHECK(w.scene().robot.holding == "cube1");
      // The planned trajectory is optimistic, so ik always runs at the arrived conf.
      CHECK(stats.exec_by_sampler["ik"] >= 1);
      const auto& planned = std::get<geom::BaseConfig>(*p.result.values.at(p.result.plan.steps[0].args[2]).geom);
      CHECK_FALSE(w.scene().robot.conf == planned);
    }
  }

  TEST_CASE("reports are not emitted while a feeding cursor has values left") {
    auto scene = std::make_shared<geom::SceneGeometry>();
    const geom::ObjectShape cube{geom::ObjectShape::Kind::Square, 0.03};
    geom::SamplerCursor c(geom::make_sampler("grasp", scene), {{"cube", cube}}, 3);
    const pddl::Literal lit{{"on", {"cube", "table"}}, true};
    CHECK_THROWS_AS(emit_anomaly("pick", {}, lit, {{"grasp", &c}}, {}, "s", 0), PrematureEmission);
    c.next();
    CHECK_THROWS_AS(emit_anomaly("pick", {}, lit, {{"grasp", &c}}, {}, "s", 0), PrematureEmission);
    while (c.next()) {
    }
    REQUIRE(c.exhausted());
    const AnomalyReport r =
        emit_anomaly("pick", {"cube"}, lit, {{"grasp", &c}}, {{"scanned", {"table"}}}, "s-1", 4);
    CHECK(r.explored.at("grasp") == geom::SamplerCapacities{}.grasp);
    CHECK(r.observed_facts == std::vector<std::string>{"(scanned table)"});
    CHECK(r.step == 4);
  }

  TEST_CASE("report json keeps its field order and round-trips") {
    AnomalyReport r{"move-and-pick", {"arm", "cube1"}, {{"on", {"cube1", "table1"}}, true},
                    {{"base_motion", 1}, {"view_conf", 8}}, {"(scanned table1)"}, "s-00", 17};
    const auto j = report_to_json(r);
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"failed_action", "args", "unsatisfied_constraint", "explored",
                                           "observed_facts", "snapshot_id", "step"});
    CHECK(j["unsatisfied_constraint"] == "(on cube1 table1)");
    CHECK(report_from_json(nlohmann::json::parse(j.dump())) == r);
  }

  TEST_CASE("execution is deterministic in plan, world and seed") {
    const Planned p = plan_kitchen("(and (on cube1 tray))", 2);
    auto once = [&](std::vector<world::AnomalyEvent> events) {
      world::World w(p.scene, events, 2);
      Executor ex(fixtures::household(), w, {.seed = 2});
      const PlanRun run = ex.execute_plan(p.result.plan, p.result.values);
      std::string out = w.snapshot_id();
      for (const auto& l : ex.trace()) out += l + "\n";
      for (const auto& x : run.xml) out += x;
      if (run.report) out += report_to_json(*run.report).dump();
      return out;
    };
    CHECK(once({}) == once({}));
    CHECK(once({move_cube_away()}) == once({move_cube_away()}));
    CHECK(once({}) != once({move_cube_away()}));
  }
}
