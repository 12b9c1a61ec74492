#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "planact/common/error.hpp"
#include "planact/common/random.hpp"
#include "planact/geom/samplers.hpp"
#include "planact/world/world.hpp"

using namespace planact;
using namespace planact::world;

namespace {

AnomalyEvent event_from(const char* text) { return parse_event(nlohmann::json::parse(text)); }

std::size_t count_object(const Scene& s, const std::string& id) {
  std::size_t n = 0;
  for (const ObjectState& o : s.objects) n += o.id == id ? 1 : 0;
  return n;
}

// Drives the robot next to `object` and grasps it with a top grasp.
ActuationResult grasp_object(World& w, const std::string& object) {
  const ObjectState* o = w.scene().find_object(object);
  const geom::Pose p = *o->pose;
  const geom::BaseConfig q{p.x, p.y - 0.5, geom::kPi / 2};
  w.execute({.kind = CommandKind::MoveBase, .conf = q});
  Command g{.kind = CommandKind::Grasp, .object = object};
  g.traj = geom::Traj{{{p.x, p.y - 0.05}, {p.x, p.y}}};
  g.grasp = geom::Grasp{};
  return w.execute(g);
}

}  // namespace

TEST_SUITE("world") {
  TEST_CASE("scene files load") {
    const Scene two = fixtures::two_tables();
    CHECK(two.furniture.size() == 6);
    std::size_t tables = 0, drawers = 0;
    for (const Furniture& f : two.furniture) {
      tables += f.kind == FurnitureKind::Table ? 1 : 0;
      drawers += f.kind == FurnitureKind::Drawer ? 1 : 0;
    }
    CHECK(tables == 2);
    CHECK(drawers == 4);

    const Scene empty = parse_scene(nlohmann::json{{"schema", 1}});
    CHECK(empty.furniture.empty());
    CHECK(empty.objects.empty());
  }

  TEST_CASE("scene schema errors") {
    nlohmann::json j = nlohmann::json::parse(read_file(data_path("scenes/kitchen.json")));
    j["objects"][1]["pose"] = j["objects"][0]["pose"];
    CHECK_THROWS_AS(parse_scene(j), OverlapError);
    CHECK_THROWS_AS(parse_scene(nlohmann::json{{"schema", 2}}), SchemaError);
    CHECK_THROWS_AS(parse_scene(nlohmann::json{{"schema", 1}, {"objects", 3}}), SchemaError);
  }

  TEST_CASE("scene json round-trip") {
    const Scene k = fixtures::kitchen();
    const Scene again = parse_scene(nlohmann::json::parse(scene_to_json(k).dump()));
    CHECK(scene_to_json(again) == scene_to_json(k));
  }

  TEST_CASE("move base with zero noise arrives exactly") {
    Scene s = fixtures::kitchen();
    s.params.motion_noise = 0;
    s.params.heading_noise = 0;
    const geom::BaseConfig target{3.0, 2.5, 0.3};
    const ActuationResult r = step(s, {.kind = CommandKind::MoveBase, .conf = target}, 42);
    CHECK(r.ok);
    CHECK(s.robot.conf == target);
  }

  TEST_CASE("arrival error stays within the configured bounds") {
    const Scene base = fixtures::kitchen();
    const geom::BaseConfig target{3.0, 2.5, 0.0};
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      Scene s = base;
      REQUIRE(step(s, {.kind = CommandKind::MoveBase, .conf = target}, seed).ok);
      CHECK(std::abs(s.robot.conf.x - target.x) <= s.params.motion_noise);
      CHECK(std::abs(s.robot.conf.y - target.y) <= s.params.motion_noise);
      CHECK(std::abs(geom::wrap_angle(s.robot.conf.theta - target.theta)) <= s.params.heading_noise + 1e-12);
    }
  }

  TEST_CASE("grasp outside tolerance is an actuation fault") {
    World w(fixtures::kitchen(), {}, 1);
    const geom::Pose p = *w.scene().find_object("cube1")->pose;
    w.execute({.kind = CommandKind::MoveBase, .conf = geom::BaseConfig{p.x, p.y - 0.5, geom::kPi / 2}});
    Command g{.kind = CommandKind::Grasp, .object = "cube1"};
    g.grasp = geom::Grasp{};
    g.traj = geom::Traj{{{p.x + 0.1, p.y - 0.05}, {p.x + 0.1, p.y}}};
    const ActuationResult r = w.execute(g);
    CHECK_FALSE(r.ok);
    CHECK(r.fault == "no object at grasp point");
    CHECK(w.scene().robot.holding.empty());

    const ActuationResult ok = grasp_object(w, "cube1");
    CHECK(ok.ok);
    CHECK(w.scene().robot.holding == "cube1");
  }

  TEST_CASE("step-indexed event fires exactly once at its step") {
    World w(fixtures::kitchen(), {event_from(R"({"id": "mv", "trigger": {"step": 3},
        "effect": {"type": "move_object", "object": "cube1", "region": "table2"}})")},
            5);
    const geom::Rect table2 = w.scene().find_furniture("table2")->rect;
    std::vector<std::string> where;
    for (int i = 0; i < 6; ++i) {
      w.execute({.kind = CommandKind::Scan, .region = "table1"});
      const geom::Vec2 p = w.scene().find_object("cube1")->pose->position();
      where.push_back(table2.contains(p) ? "table2" : "table1");
    }
    CHECK(where == std::vector<std::string>{"table1", "table1", "table2", "table2", "table2", "table2"});
    CHECK(w.fired_events() == std::vector<std::string>{"mv"});
    CHECK(count_object(w.scene(), "cube1") == 1);
  }

  TEST_CASE("covered objects stay hidden until the cover is lifted") {
    World w(fixtures::kitchen(), {event_from(R"({"id": "hide", "trigger": {"step": 1},
        "effect": {"type": "hide_under", "object": "green_cube", "region": "basket"}})")},
            3);
    w.execute({.kind = CommandKind::Scan, .region = "table2"});
    const Observation before = w.perceive({"table1", std::nullopt});
    CHECK(before.find("green_cube") == nullptr);
    CHECK(before.find("cube1") != nullptr);
    w.execute({.kind = CommandKind::MoveBase, .conf = geom::BaseConfig{2.0, 2.6, geom::kPi / 2}});
    const ActuationResult lift = w.execute({.kind = CommandKind::Scan, .region = "basket"});
    REQUIRE(lift.observation);
    CHECK(lift.observation->find("green_cube") != nullptr);
    CHECK(w.perceive({"table1", std::nullopt}).find("green_cube") != nullptr);
  }

  TEST_CASE("perception of an empty region and noise statistics") {
    World w(fixtures::kitchen(), {}, 9);
    CHECK(w.perceive({"drawer1", std::nullopt}).detections.empty());
    const geom::Pose truth = *w.scene().find_object("cube1")->pose;
    const double eps = w.scene().params.perception_noise;
    double sx = 0, sy = 0;
    const int n = 100;
    for (int i = 0; i < n; ++i) {
      const Observation o = w.perceive({"table1", std::nullopt});
      const Detection* d = o.find("cube1");
      REQUIRE(d != nullptr);
      CHECK(std::abs(d->pose.x - truth.x) <= eps);
      CHECK(std::abs(d->pose.y - truth.y) <= eps);
      sx += d->pose.x - truth.x;
      sy += d->pose.y - truth.y;
    }
    // Uniform(-eps, eps) has sigma eps/sqrt(3); the mean of n draws has sigma/sqrt(n).
    const double sigma_mean = eps / std::sqrt(3.0) / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(sx / n) <= 3 * sigma_mean);
    CHECK(std::abs(sy / n) <= 3 * sigma_mean);
  }

  TEST_CASE("perception is deterministic in scene, query and seed") {
    const Scene s = fixtures::kitchen();
    const auto a = observation_to_json(perceive(s, {"table1", std::nullopt}, 12));
    const auto b = observation_to_json(perceive(s, {"table1", std::nullopt}, 12));
    CHECK(a == b);
    CHECK(a != observation_to_json(perceive(s, {"table1", std::nullopt}, 13)));
  }

  TEST_CASE("ground truth projection") {
    World w(fixtures::kitchen(), {event_from(R"J({"id": "occ", "trigger": {"literal": "(holding arm green_cube)"},
        "effect": {"type": "occupy_receptacle", "object": "black_cube", "region": "bowl"}})J")},
            4);
    const pddl::FactSet before = ground_truth_state(w.scene());
    CHECK(before.count({"on", {"cube1", "table1"}}) == 1);
    CHECK(before.count({"on", {"black_cube", "bowl"}}) == 0);

    REQUIRE(grasp_object(w, "green_cube").ok);
    const pddl::FactSet after = ground_truth_state(w.scene());
    CHECK(after.count({"holding", {"arm", "green_cube"}}) == 1);
    for (const pddl::Fact& f : after) {
      if (f.predicate == "on") CHECK(f.args[0] != "green_cube");
    }
    CHECK(after.count({"on", {"black_cube", "bowl"}}) == 1);
    CHECK(w.fired_events() == std::vector<std::string>{"occ"});
  }

  TEST_CASE("state flags toggle only at the right appliance") {
    Scene s = fixtures::kitchen();
    s.find_object("apple")->flags.insert("dirty");
    Command heat{.kind = CommandKind::ToggleState, .object = "apple", .region = "sink", .toggle = "heat"};
    CHECK_FALSE(step(s, heat, 0).ok);
    heat.region = "microwave";
    CHECK_FALSE(step(s, heat, 0).ok);  // the apple is not inside
    CHECK(s.find_object("apple")->flags.count("heated") == 0);
  }

  TEST_CASE("property: commands and events conserve objects and are deterministic") {
    const Scene base = fixtures::kitchen();
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
      const std::uint64_t seed = rng.next();
      std::vector<Command> trace;
      for (int i = 0; i < 8; ++i) {
        switch (rng.below(3)) {
          case 0:
            trace.push_back({.kind = CommandKind::MoveBase,
                             .conf = geom::BaseConfig{rng.uniform(0.5, 5.5), rng.uniform(1.0, 2.8), 0}});
            break;
          case 1: trace.push_back({.kind = CommandKind::Scan, .region = rng.below(2) ? "drawer1" : "table2"}); break;
          default: {
            Command g{.kind = CommandKind::Grasp, .object = "cube1"};
            g.traj = geom::Traj{{{1.4, 3.15}, {1.4, 3.2}}};
            g.grasp = geom::Grasp{};
            trace.push_back(g);
          }
        }
      }
      const std::vector<AnomalyEvent> events = {event_from(R"({"id": "mv", "trigger": {"step": 2},
          "effect": {"type": "move_object", "object": "apple", "region": "drawer2"}})")};
      World a(base, events, seed);
      World b(base, events, seed);
      for (const Command& c : trace) {
        a.execute(c);
        b.execute(c);
        const Observation seen = a.perceive({});
        b.perceive({});
        // Occluded objects never show up.
        for (const Detection& d : seen.detections) CHECK_FALSE(a.scene().occluded(*a.scene().find_object(d.object)));
        for (const ObjectState& o : base.objects) CHECK(count_object(a.scene(), o.id) == 1);
        CHECK(a.scene().objects.size() == base.objects.size());
        CHECK_NOTHROW(a.scene().check_invariants());
      }
      CHECK(a.snapshot_id() == b.snapshot_id());
      CHECK(a.observation_log_text() == b.observation_log_text());
    }
  }
}
