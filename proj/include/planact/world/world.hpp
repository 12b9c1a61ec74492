#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "planact/geom/geometry.hpp"
#include "planact/pddl/types.hpp"
#include "planact/world/scene.hpp"

namespace planact::world {

// Perception ------------------------------------------------------------------

struct PerceptionQuery {
  /// Restricts detections to this furniture region; empty means anywhere.
  std::string region;
  /// Restricts detections to the sensor range around this base conf.
  std::optional<geom::BaseConfig> viewpoint;
};

struct Detection {
  std::string object;
  geom::Pose pose;
  std::set<std::string> flags;
  /// Region the observed pose falls in (may be empty).
  std::string region;
};

struct Observation {
  PerceptionQuery query;
  std::vector<Detection> detections;
  /// Object in the gripper and its flags, observed directly.
  std::string held;
  std::set<std::string> held_flags;

  const Detection* find(const std::string& object) const;
};

/// Unoccluded objects matching the query, each with seeded uniform noise of at
/// most the scene's perception_noise per component.
Observation perceive(const Scene& scene, const PerceptionQuery& query, std::uint64_t seed);

nlohmann::ordered_json observation_to_json(const Observation& o);

// Actuation -------------------------------------------------------------------

enum class CommandKind { MoveBase, Scan, PreApproach, Approach, Grasp, Release, ToggleState };

const char* to_string(CommandKind k);

struct Command {
  CommandKind kind = CommandKind::MoveBase;
  std::string object;
  std::string region;
  /// "clean", "heat" or "cook" for ToggleState.
  std::string toggle;
  std::optional<geom::BaseConfig> conf;
  std::optional<geom::Traj> traj;
  std::optional<geom::Pose> pose;
  std::optional<geom::Grasp> grasp;
};

struct ActuationResult {
  bool ok = true;
  /// Non-empty on an actuation fault, e.g. "no object at grasp point".
  std::string fault;
  std::optional<Observation> observation;
};

/// Applies one command to `scene`. Faults are reported in the result and
/// leave the scene unchanged.
ActuationResult step(Scene& scene, const Command& command, std::uint64_t seed);

// Anomaly events --------------------------------------------------------------

struct AnomalyEvent {
  enum class Type { MoveObject, OccupyReceptacle, SetFlag, HideUnder };

  std::string id;
  /// Fires after this many commands have executed...
  std::optional<std::size_t> at_step;
  /// ...or after the first command whose resulting ground truth satisfies this.
  std::optional<pddl::Literal> when;

  Type type = Type::MoveObject;
  std::string object;
  /// Destination region, receptacle or cover.
  std::string region;
  std::string flag;
  bool value = true;
  std::optional<geom::Pose> pose;
};

AnomalyEvent parse_event(const nlohmann::json& j);
nlohmann::ordered_json event_to_json(const AnomalyEvent& e);

/// Applies an event's effect. Throws OverlapError when no collision-free
/// placement exists.
void apply_event(Scene& scene, const AnomalyEvent& e, std::uint64_t seed);

// Symbolic projection ---------------------------------------------------------

struct Projection {
  std::vector<pddl::TypedName> objects;
  pddl::FactSet facts;
  /// Geometric values for conf/pose/grasp symbols and object/region symbols.
  std::map<std::string, geom::GeomValue> values;
};

/// Symbol naming: robot conf "q0", object pose "p0_<obj>", held grasp "g0_<obj>".
Projection project(const Scene& scene);
pddl::FactSet ground_truth_state(const Scene& scene);

// World -----------------------------------------------------------------------

/// Scene plus a step clock, pending events and an observation log.
class World {
 public:
  World(Scene scene, std::vector<AnomalyEvent> events, std::uint64_t seed);

  /// Executes a command, advances the clock and fires due events.
  ActuationResult execute(const Command& command);
  Observation perceive(const PerceptionQuery& query);

  const Scene& scene() const { return scene_; }
  std::size_t steps() const { return steps_; }
  const std::vector<AnomalyEvent>& events() const { return events_; }
  const std::vector<std::string>& fired_events() const { return fired_; }
  /// One JSON document per perceive() call.
  const std::vector<std::string>& observation_log() const { return log_; }
  std::string observation_log_text() const;
  /// Content hash of the current scene.
  std::string snapshot_id() const;

 private:
  void fire_due_events();

  Scene scene_;
  std::vector<AnomalyEvent> events_;
  std::vector<bool> done_;
  std::vector<std::string> fired_;
  std::uint64_t seed_;
  std::size_t steps_ = 0;
  std::size_t perceptions_ = 0;
  std::vector<std::string> log_;
};

}  // namespace planact::world
