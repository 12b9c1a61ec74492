#include <doctest.h>

#include <algorithm>

#include "../support/blocks_oracle.hpp"
#include "../support/gen.hpp"
#include "fixtures.hpp"
#include "planact/common/error.hpp"
#include "planact/harness/blocksworld.hpp"
#include "planact/harness/household.hpp"
#include "planact/pddl/semantics.hpp"
#include "planact/planner/planner.hpp"

using namespace planact;

namespace {

const char* kMotionDomain = R"(
(define (domain motion)
  (:types conf traj - object)
  (:predicates (atconf ?q - conf) (conf ?q - conf) (basemotion ?q1 - conf ?t - traj ?q2 - conf))
  (:action move
    :parameters (?q1 - conf ?t - traj ?q2 - conf)
    :precondition (and (atconf ?q1) (basemotion ?q1 ?t ?q2))
    :effect (and (atconf ?q2) (not (atconf ?q1)))))
)";

const char* kMotionStreams = R"(
(define (stream motion)
  (:stream plan-base-motion
    :inputs (?q1 - conf ?q2 - conf)
    :domain (and (conf ?q1) (conf ?q2))
    :outputs (?t - traj)
    :certified (basemotion ?q1 ?t ?q2)))
)";

struct HouseholdRun {
  planner::PlanResult result;
  planner::SamplerStats stats;
};

HouseholdRun plan_household(const char* goal, const planner::DeferralPolicy& policy, std::uint64_t seed = 3) {
  const world::Scene scene = fixtures::kitchen();
  const auto task = harness::household_task(fixtures::household(), scene, pddl::parse_conjunction(goal));
  const auto registry = geom::make_registry(std::make_shared<geom::SceneGeometry>(scene.geometry()));
  HouseholdRun run;
  run.result = planner::plan_with_streams(fixtures::household(), task.problem, fixtures::household_streams(),
                                          registry, policy, task.values, seed, &run.stats);
  return run;
}

pddl::Problem blocks_problem(const char* init, const char* goal) {
  return pddl::parse_problem(std::string("(define (problem b) (:domain blocksworld) (:objects a b c - block) (:init ") +
                                 init + ") (:goal " + goal + "))",
                             fixtures::blocks());
}

}  // namespace

TEST_SUITE("planner") {
  TEST_CASE("zero levels certify nothing") {
    const pddl::Domain d = pddl::parse_domain(kMotionDomain);
    const pddl::Problem p = pddl::parse_problem(
        "(define (problem m) (:domain motion) (:objects q1 q2 - conf) (:init (conf q1) (conf q2) (atconf q1)) "
        "(:goal (and (atconf q2))))",
        d);
    planner::ValueMap values;
    const auto out = planner::instantiate_streams(d, p, {}, geom::SamplerRegistry{}, {{}, 0}, values);
    CHECK(out.certified.empty());
    CHECK(out.assumed.empty());
  }

  TEST_CASE("one base-motion level matches a direct sampler call") {
    const pddl::Domain d = pddl::parse_domain(kMotionDomain);
    const auto streams = pddl::parse_streams(kMotionStreams, d);
    const pddl::Problem p = pddl::parse_problem(
        "(define (problem m) (:domain motion) (:objects q1 q2 - conf) (:init (conf q1) (conf q2) (atconf q1)) "
        "(:goal (and (atconf q2))))",
        d);
    auto scene = std::make_shared<geom::SceneGeometry>();
    const geom::BaseConfig c1{1, 1, 0}, c2{4, 2, 0};
    planner::ValueMap values{{"q1", {"conf", c1, false}}, {"q2", {"conf", c2, false}}};
    const auto registry = geom::make_registry(scene, {{"plan-base-motion", "base_motion"}});
    planner::SamplerStats stats;
    const auto out = planner::instantiate_streams(d, p, streams, registry, {{}, 1}, values, 0, &stats);
    const auto it = std::find_if(out.certified.begin(), out.certified.end(), [](const pddl::Fact& f) {
      return f.predicate == "basemotion" && f.args[0] == "q1" && f.args[2] == "q2";
    });
    REQUIRE(it != out.certified.end());
    const planner::Value& t = values.at(it->args[1]);
    CHECK_FALSE(t.optimistic);
    REQUIRE(t.geom);
    CHECK(std::get<geom::Traj>(*t.geom) == *geom::sample_base_motion(c1, c2, *scene));
    CHECK(out.assumed.empty());
    CHECK(stats.plan_phase > 0);
  }

  TEST_CASE("default deferral for the household domain") {
    const auto policy = planner::default_deferral(fixtures::household());
    CHECK(policy.deferred == std::set<std::string>{"basemotion", "kin"});
    CHECK_NOTHROW(planner::check_policy(fixtures::household(), policy));
    CHECK_THROWS_AS(planner::check_policy(fixtures::household(), {{"holding"}, 3}), UnknownPredicate);
  }

  TEST_CASE("deferred kin is assumed and ik is never sampled at plan time") {
    const HouseholdRun run = plan_household("(and (holding arm cube1))", planner::default_deferral(fixtures::household()));
    const auto& r = run.result;
    CHECK(run.stats.plan_by_stream.count("inverse-kinematics") == 0);
    for (const pddl::Fact& f : r.task.certified) CHECK(f.predicate != "kin");
    bool saw_pick = false, saw_move = false;
    for (const pddl::GroundAction& s : r.plan.steps) {
      saw_move = saw_move || s.schema == "move";
      if (s.schema != "pick") continue;
      saw_pick = true;
      for (const pddl::Fact& f : s.static_pre) {
        if (f.predicate != "kin") continue;
        CHECK(r.task.assumed.count(f) == 1);
        CHECK(r.task.certified.count(f) == 0);
        CHECK(r.values.at(f.args.back()).optimistic);
      }
    }
    CHECK(saw_pick);
    CHECK(saw_move);
    CHECK(pddl::validate_plan(fixtures::household(), r.task.problem, r.plan, r.task.all_static()).ok);
  }

  TEST_CASE("goal already satisfied gives the empty plan") {
    const pddl::Problem p = blocks_problem("(ontable a) (ontable b) (ontable c) (clear a) (clear b) (clear c) (handempty)",
                                           "(and (ontable a))");
    const auto task = planner::ground(fixtures::blocks(), p, {}, {});
    CHECK(planner::plan(task).steps.empty());
  }

  TEST_CASE("unreachable goal is NoPlan") {
    const pddl::Problem p = blocks_problem("(ontable a) (ontable b) (ontable c) (clear a) (clear b) (clear c) (handempty)",
                                           "(and (on a a))");
    CHECK_THROWS_AS(planner::plan(planner::ground(fixtures::blocks(), p, {}, {})), NoPlan);
  }

  TEST_CASE("three-block instances: validated and mostly optimal") {
    std::size_t optimal = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto inst = harness::gen_blocksworld(fixtures::blocks(), 3, seed);
      const auto task = planner::ground(fixtures::blocks(), inst.problem, {}, {});
      const pddl::Plan plan = planner::plan(task);
      CHECK(pddl::validate_plan(fixtures::blocks(), inst.problem, plan, {}).ok);
      pddl::FactSet goal;
      for (const pddl::Literal& l : inst.problem.goal) goal.insert(l.atom);
      const auto best = oracle::shortest(oracle::from_facts(inst.problem.init), goal);
      REQUIRE(best);
      CHECK(plan.steps.size() >= *best);
      optimal += plan.steps.size() == *best ? 1 : 0;
    }
    CHECK(optimal >= 18);
  }

  TEST_CASE("planner reachability equals the oracle's") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto inst = harness::gen_blocksworld(fixtures::blocks(), 3, seed);
      const auto states = planner::reachable_states(planner::ground(fixtures::blocks(), inst.problem, {}, {}));
      std::set<pddl::FactSet> expected;
      for (const oracle::BlocksState& s : oracle::reachable(oracle::from_facts(inst.problem.init))) {
        expected.insert(oracle::to_facts(s));
      }
      CHECK(states == expected);
      CHECK(states.size() == 22);
    }
  }

  TEST_CASE("combine_actions merges move with pick and place") {
    const HouseholdRun run = plan_household("(and (on cube1 tray))", planner::default_deferral(fixtures::household()));
    const auto combined = planner::combine_actions(run.result.plan);
    std::vector<std::string> names;
    for (const auto& c : combined) names.push_back(c.name);
    CHECK(names == std::vector<std::string>{"move-and-pick", "move-and-place"});
    CHECK(combined[0].constituents.size() == 2);

    pddl::Plan lone;
    lone.steps = {run.result.plan.steps[1]};
    const auto single = planner::combine_actions(lone);
    REQUIRE(single.size() == 1);
    CHECK(single[0].name == "pick");
    CHECK(planner::combine_actions({}).empty());
  }

  TEST_CASE("property: combining preserves sequential effects") {
    Rng rng(8);
    const std::vector<std::string> names = {"move", "pick", "place", "scan_table", "move"};
    for (int i = 0; i < 100; ++i) {
      pddl::Plan plan;
      for (int k = 0; k < 10; ++k) {
        pddl::GroundAction a = testgen::random_ground_action(rng);
        a.schema = names[rng.below(names.size())];
        plan.steps.push_back(a);
      }
      const auto combined = planner::combine_actions(plan);
      CHECK(combined.size() <= plan.steps.size());
      pddl::FactSet s1 = testgen::random_facts(rng, 6);
      pddl::FactSet s2 = s1;
      for (const auto& a : plan.steps) s1 = pddl::apply(a, s1);
      std::size_t count = 0;
      for (const auto& c : combined) {
        s2 = planner::apply_combined(c, s2);
        count += c.constituents.size();
        for (std::size_t k = 1; k < c.constituents.size(); ++k) CHECK(c.constituents[k - 1].schema == "move");
      }
      CHECK(s1 == s2);
      CHECK(count == plan.steps.size());
    }
  }

  TEST_CASE("identical inputs give byte-identical plans") {
    const auto policy = planner::default_deferral(fixtures::household());
    const HouseholdRun a = plan_household("(and (on cube1 tray))", policy, 5);
    const HouseholdRun b = plan_household("(and (on cube1 tray))", policy, 5);
    CHECK(planner::plan_to_json(a.result.plan, a.result.values, &a.result.task).dump() ==
          planner::plan_to_json(b.result.plan, b.result.values, &b.result.task).dump());
  }

  TEST_CASE("plan json round-trip") {
    const HouseholdRun run = plan_household("(and (on cube1 tray))", planner::default_deferral(fixtures::household()));
    const auto j = planner::plan_to_json(run.result.plan, run.result.values, &run.result.task);
    const pddl::Plan again = planner::plan_from_json(nlohmann::json::parse(j.dump()), fixtures::household());
    CHECK(again.steps == run.result.plan.steps);
    const planner::PlanSupport support = planner::plan_support_from_json(nlohmann::json::parse(j.dump()));
    for (const auto& step : run.result.plan.steps) {
      for (const pddl::Fact& f : step.static_pre) {
        CHECK((support.certified.count(f) + support.assumed.count(f) + run.result.task.statics.count(f)) >= 1);
      }
    }
  }

  TEST_CASE("deferral lowers plan-phase sampler calls") {
    const auto deferred = plan_household("(and (on cube1 tray))", planner::default_deferral(fixtures::household()));
    const auto full = plan_household("(and (on cube1 tray))", {{}, 3});
    CHECK(deferred.stats.plan_phase < full.stats.plan_phase);
    CHECK(deferred.stats.exec_phase == 0);
    CHECK(full.stats.exec_phase == 0);

    planner::SamplerStats none;
    const world::Scene scene = fixtures::kitchen();
    const auto task = harness::household_task(fixtures::household(), scene, pddl::parse_conjunction("(and (on cube1 table1))"));
    const auto registry = geom::make_registry(std::make_shared<geom::SceneGeometry>(scene.geometry()));
    const auto r = planner::plan_with_streams(fixtures::household(), task.problem, fixtures::household_streams(),
                                              registry, planner::default_deferral(fixtures::household()), task.values,
                                              0, &none);
    CHECK(r.plan.steps.empty());
    CHECK(none.plan_phase == 0);
    CHECK(none.exec_phase == 0);
  }

  TEST_CASE("property: deferring more never loses solvability") {
    for (const char* goal : {"(and (on cube1 tray))", "(and (holding arm apple))", "(and (on green_cube table2))"}) {
      CAPTURE(goal);
      const auto full = plan_household(goal, {{}, 3});
      const auto kin_only = plan_household(goal, {{"kin"}, 3});
      const auto both = plan_household(goal, planner::default_deferral(fixtures::household()));
      CHECK_FALSE(full.result.plan.steps.empty());
      CHECK_FALSE(kin_only.result.plan.steps.empty());
      CHECK_FALSE(both.result.plan.steps.empty());
    }
  }
}
