#include "planact/world/world.hpp"

#include <algorithm>
#include <cstdio>

#include "planact/common/error.hpp"
#include "planact/common/random.hpp"
#include "planact/geom/samplers.hpp"
#include "planact/pddl/parser.hpp"

namespace planact::world {

namespace {

using ojson = nlohmann::ordered_json;
using nlohmann::json;

constexpr std::uint64_t kMoveSalt = 0x6d6f7665ULL;
constexpr std::uint64_t kEventSalt = 0x6576656eULL;

bool within_reach(const Scene& s, geom::Vec2 p) {
  return geom::distance(s.robot.conf.position(), p) <= s.params.reach + 1e-9;
}

ActuationResult fault(std::string why) {
  ActuationResult r;
  r.ok = false;
  r.fault = std::move(why);
  return r;
}

ojson pose_json(const geom::Pose& p) { return ojson::array({p.x, p.y, p.theta}); }

/// Collision-free placement of `object` inside `region`, preferring `wanted`.
geom::Pose place_for_event(const Scene& scene, const ObjectState& object, const Furniture& region,
                           const std::optional<geom::Pose>& wanted, std::uint64_t seed) {
  geom::SceneGeometry g = scene.geometry();
  // Capacity is ignored here: events model arbitrary outside interference.
  for (geom::RegionGeom& r : g.regions) r.capacity.reset();
  if (wanted) {
    for (const geom::ObjectGeom& other : g.objects) {
      if (other.id != object.id &&
          geom::footprints_overlap(object.shape, wanted->position(), other.shape, other.pose.position())) {
        throw OverlapError("event places " + object.id + " on top of " + other.id);
      }
    }
    return *wanted;
  }
  const geom::RegionGeom rg{region.id, region.rect, std::nullopt, region.blocks_base};
  for (std::size_t i = 0; i < g.capacities.pose; ++i) {
    if (auto p = geom::sample_stable_pose(object.id, object.shape, rg, g, seed, i)) return *p;
  }
  throw OverlapError("no free placement for " + object.id + " in " + region.id);
}

}  // namespace

// ---------------------------------------------------------------------------
// Perception

const Detection* Observation::find(const std::string& object) const {
  for (const Detection& d : detections) {
    if (d.object == object) return &d;
  }
  return nullptr;
}

Observation perceive(const Scene& scene, const PerceptionQuery& query, std::uint64_t seed) {
  Observation obs;
  obs.query = query;
  const Furniture* region = query.region.empty() ? nullptr : scene.find_furniture(query.region);
  const double eps = scene.params.perception_noise;
  for (const ObjectState& o : scene.objects) {
    if (!o.pose || scene.occluded(o)) continue;
    const geom::Vec2 at = o.pose->position();
    if (!query.region.empty() && (region == nullptr || !region->rect.contains(at))) continue;
    if (query.viewpoint && geom::distance(query.viewpoint->position(), at) > scene.params.sensor_range) continue;
    Rng rng(hash_combine(seed, fnv1a(o.id)));
    Detection d;
    d.object = o.id;
    const double dx = rng.uniform(-eps, eps);
    const double dy = rng.uniform(-eps, eps);
    const double dt = rng.uniform(-eps, eps);
    d.pose = {o.pose->x + dx, o.pose->y + dy, geom::wrap_angle(o.pose->theta + dt)};
    d.flags = o.flags;
    if (const Furniture* f = scene.region_at(o.pose->position())) d.region = f->id;
    obs.detections.push_back(std::move(d));
  }
  if (!scene.robot.holding.empty()) {
    obs.held = scene.robot.holding;
    if (const ObjectState* o = scene.find_object(obs.held)) obs.held_flags = o->flags;
  }
  return obs;
}

nlohmann::ordered_json observation_to_json(const Observation& o) {
  ojson j;
  j["region"] = o.query.region;
  j["viewpoint"] = o.query.viewpoint
                       ? ojson::array({o.query.viewpoint->x, o.query.viewpoint->y, o.query.viewpoint->theta})
                       : ojson();
  ojson dets = ojson::array();
  for (const Detection& d : o.detections) {
    ojson flags = ojson::array();
    for (const std::string& f : d.flags) flags.push_back(f);
    dets.push_back({{"object", d.object}, {"pose", pose_json(d.pose)}, {"region", d.region}, {"flags", flags}});
  }
  j["detections"] = std::move(dets);
  j["held"] = o.held.empty() ? ojson() : ojson(o.held);
  return j;
}

// ---------------------------------------------------------------------------
// Actuation

const char* to_string(CommandKind k) {
  switch (k) {
    case CommandKind::MoveBase: return "MoveBase";
    case CommandKind::Scan: return "Scan";
    case CommandKind::PreApproach: return "PreApproach";
    case CommandKind::Approach: return "Approach";
    case CommandKind::Grasp: return "Grasp";
    case CommandKind::Release: return "Release";
    case CommandKind::ToggleState: return "ToggleState";
  }
  return "MoveBase";
}

ActuationResult step(Scene& scene, const Command& c, std::uint64_t seed) {
  switch (c.kind) {
    case CommandKind::MoveBase: {
      if (!c.conf) return fault("MoveBase without target conf");
      const geom::SceneGeometry g = scene.geometry();
      if (c.traj) {
        if (c.traj->waypoints.size() < 2) return fault("trajectory has fewer than 2 waypoints");
        if (geom::distance(c.traj->waypoints.back(), c.conf->position()) > 1e-6) {
          return fault("trajectory does not end at the target conf");
        }
        if (!g.traj_free(*c.traj)) return fault("trajectory collides with furniture");
      } else if (!g.base_free(c.conf->position())) {
        return fault("target conf in collision");
      }
      Rng rng(hash_combine(seed, kMoveSalt));
      const double d = scene.params.motion_noise;
      const double h = scene.params.heading_noise;
      geom::BaseConfig arrived{c.conf->x + rng.uniform(-d, d), c.conf->y + rng.uniform(-d, d),
                               geom::wrap_angle(c.conf->theta + rng.uniform(-h, h))};
      // A perturbed arrival that would clip furniture stops at the target.
      if (!g.base_free(arrived.position())) arrived = *c.conf;
      scene.robot.conf = arrived;
      return {};
    }
    case CommandKind::Scan: {
      Furniture* f = scene.find_furniture(c.region);
      if (f == nullptr) return fault("unknown region " + c.region);
      if (f->kind == FurnitureKind::Drawer || f->kind == FurnitureKind::Cover) f->closed = false;
      scene.scanned.insert(f->id);
      ActuationResult r;
      r.observation = perceive(scene, {f->id, scene.robot.conf}, seed);
      return r;
    }
    case CommandKind::PreApproach:
    case CommandKind::Approach: {
      if (!c.traj || c.traj->waypoints.empty()) return fault("approach without trajectory");
      const geom::Vec2 p =
          c.kind == CommandKind::PreApproach ? c.traj->waypoints.front() : c.traj->waypoints.back();
      if (!within_reach(scene, p)) return fault("approach point out of reach");
      return {};
    }
    case CommandKind::Grasp: {
      if (!scene.robot.holding.empty()) return fault("gripper already holds " + scene.robot.holding);
      if (!c.traj || c.traj->waypoints.empty() || !c.grasp) return fault("grasp without trajectory");
      ObjectState* o = scene.find_object(c.object);
      const geom::Vec2 tip = c.traj->waypoints.back();
      if (o == nullptr || !o->pose || scene.occluded(*o)) return fault("no object at grasp point");
      if (!within_reach(scene, tip)) return fault("grasp point out of reach");
      const geom::Vec2 truth = geom::grasp_point(*o->pose, *c.grasp);
      if (geom::distance(truth, tip) > scene.params.grasp_tolerance) return fault("no object at grasp point");
      scene.robot.holding = o->id;
      scene.robot.grasp = *c.grasp;
      o->pose.reset();
      return {};
    }
    case CommandKind::Release: {
      if (scene.robot.holding.empty() || scene.robot.holding != c.object) {
        return fault("not holding " + c.object);
      }
      if (!c.pose) return fault("release without pose");
      if (!within_reach(scene, c.pose->position())) return fault("release pose out of reach");
      const Furniture* region = scene.region_at(c.pose->position());
      if (region == nullptr) return fault("release pose is not on any surface");
      ObjectState* o = scene.find_object(c.object);
      std::size_t inside = 0;
      for (const ObjectState& other : scene.objects) {
        if (other.id == o->id || !other.pose) continue;
        if (geom::footprints_overlap(o->shape, c.pose->position(), other.shape, other.pose->position())) {
          return fault("release pose collides with " + other.id);
        }
        if (region->rect.contains(other.pose->position())) ++inside;
      }
      if (region->capacity && inside >= *region->capacity) return fault(region->id + " is full");
      o->pose = c.pose;
      o->pose->theta = geom::wrap_angle(o->pose->theta);
      scene.robot.holding.clear();
      return {};
    }
    case CommandKind::ToggleState: {
      ObjectState* o = scene.find_object(c.object);
      const Furniture* f = scene.find_furniture(c.region);
      if (o == nullptr || f == nullptr) return fault("unknown toggle target");
      const bool held = scene.robot.holding == o->id;
      const bool inside = o->pose && f->rect.contains(o->pose->position());
      if (c.toggle == "clean") {
        if (f->appliance != "sink") return fault(f->id + " is not a sink");
        if (!inside && !(held && geom::point_rect_distance(scene.robot.conf.position(), f->rect) <=
                                     scene.params.sensor_range)) {
          return fault(o->id + " is not at " + f->id);
        }
        o->flags.erase("dirty");
        o->flags.insert("cleaned");
        return {};
      }
      const std::string needed = c.toggle == "heat" ? "microwave" : c.toggle == "cook" ? "stove" : "";
      if (needed.empty()) return fault("unknown toggle " + c.toggle);
      if (f->appliance != needed) return fault(f->id + " is not a " + needed);
      if (!inside) return fault(o->id + " is not in " + f->id);
      o->flags.insert(c.toggle == "heat" ? "heated" : "cooked");
      return {};
    }
  }
  return fault("unknown command");
}

// ---------------------------------------------------------------------------
// Events

AnomalyEvent parse_event(const json& j) {
  AnomalyEvent e;
  try {
    e.id = j.value("id", "");
    const json& trig = j.at("trigger");
    if (trig.contains("step")) e.at_step = trig.at("step").get<std::size_t>();
    if (trig.contains("literal")) {
      std::vector<pddl::Literal> lits = pddl::parse_conjunction(trig.at("literal").get<std::string>());
      if (lits.size() != 1) throw SchemaError("event trigger literal must be a single literal");
      e.when = lits.front();
    }
    if (!e.at_step && !e.when) throw SchemaError("event trigger needs a step or a literal");
    const json& eff = j.at("effect");
    const std::string type = eff.at("type").get<std::string>();
    if (type == "move_object") {
      e.type = AnomalyEvent::Type::MoveObject;
    } else if (type == "occupy_receptacle") {
      e.type = AnomalyEvent::Type::OccupyReceptacle;
    } else if (type == "set_flag") {
      e.type = AnomalyEvent::Type::SetFlag;
    } else if (type == "hide_under") {
      e.type = AnomalyEvent::Type::HideUnder;
    } else {
      throw SchemaError("unknown event effect " + type);
    }
    e.object = eff.at("object").get<std::string>();
    e.region = eff.value("region", "");
    e.flag = eff.value("flag", "");
    e.value = eff.value("value", true);
    if (eff.contains("pose")) {
      const json& p = eff.at("pose");
      e.pose = geom::Pose{p.at(0).get<double>(), p.at(1).get<double>(), p.size() > 2 ? p.at(2).get<double>() : 0.0};
    }
    if (e.type != AnomalyEvent::Type::SetFlag && e.region.empty()) throw SchemaError("event needs a region");
    if (e.type == AnomalyEvent::Type::SetFlag &&
        std::find(object_flags().begin(), object_flags().end(), e.flag) == object_flags().end()) {
      throw SchemaError("unknown flag " + e.flag);
    }
  } catch (const json::exception& ex) {
    throw SchemaError(std::string("event: ") + ex.what());
  }
  return e;
}

nlohmann::ordered_json event_to_json(const AnomalyEvent& e) {
  static const char* kTypes[] = {"move_object", "occupy_receptacle", "set_flag", "hide_under"};
  ojson j;
  j["id"] = e.id;
  ojson trig = ojson::object();
  if (e.at_step) trig["step"] = *e.at_step;
  if (e.when) trig["literal"] = pddl::to_string(*e.when);
  j["trigger"] = trig;
  ojson eff = {{"type", kTypes[static_cast<int>(e.type)]}, {"object", e.object}};
  if (!e.region.empty()) eff["region"] = e.region;
  if (!e.flag.empty()) eff["flag"] = e.flag;
  if (e.type == AnomalyEvent::Type::SetFlag) eff["value"] = e.value;
  if (e.pose) eff["pose"] = pose_json(*e.pose);
  j["effect"] = eff;
  return j;
}

void apply_event(Scene& scene, const AnomalyEvent& e, std::uint64_t seed) {
  ObjectState* o = scene.find_object(e.object);
  if (o == nullptr) throw SchemaError("event " + e.id + " names unknown object " + e.object);
  if (e.type == AnomalyEvent::Type::SetFlag) {
    if (e.value) {
      o->flags.insert(e.flag);
      if (e.flag == "dirty") o->flags.erase("cleaned");
    } else {
      o->flags.erase(e.flag);
    }
    return;
  }
  Furniture* target = scene.find_furniture(e.region);
  if (target == nullptr) throw SchemaError("event " + e.id + " names unknown region " + e.region);
  const geom::Pose pose = place_for_event(scene, *o, *target, e.pose, seed);
  if (scene.robot.holding == o->id) scene.robot.holding.clear();
  o->pose = pose;
  if (e.type == AnomalyEvent::Type::HideUnder) target->closed = true;
}

// ---------------------------------------------------------------------------
// Projection

Projection project(const Scene& s) {
  Projection p;
  auto fact = [&](std::string pred, std::vector<std::string> args) {
    p.facts.insert({std::move(pred), std::move(args)});
  };
  const std::string& arm = s.robot.arm;
  p.objects.push_back({arm, "arm"});
  p.objects.push_back({"q0", "conf"});
  p.values["q0"] = s.robot.conf;
  fact("arm", {arm});
  fact("conf", {"q0"});
  fact("atconf", {"q0"});
  if (s.robot.holding.empty()) fact("handempty", {arm});

  for (const Furniture& f : s.furniture) {
    p.objects.push_back({f.id, "region"});
    p.values[f.id] = f.rect;
    fact(to_string(f.kind), {f.id});
    if (!f.appliance.empty()) fact(f.appliance, {f.id});
    if (f.closed) fact("closed", {f.id});
    if (s.scanned.count(f.id)) fact("scanned", {f.id});
  }
  for (const ObjectState& o : s.objects) {
    p.objects.push_back({o.id, "item"});
    p.values[o.id] = o.shape;
    for (const Furniture& f : s.furniture) {
      if (f.kind != FurnitureKind::Cover) fact("stackable", {o.id, f.id});
    }
    for (const std::string& flag : o.flags) fact(flag, {o.id});
    if (s.robot.holding == o.id) {
      const std::string g = "g0_" + o.id;
      p.objects.push_back({g, "grasp"});
      p.values[g] = s.robot.grasp;
      fact("holding", {arm, o.id});
      fact("atgrasp", {arm, o.id, g});
      fact("grasp", {o.id, g});
      continue;
    }
    if (!o.pose) continue;  // lost in a belief scene
    const std::string pose = "p0_" + o.id;
    p.objects.push_back({pose, "pose"});
    p.values[pose] = *o.pose;
    fact("pose", {o.id, pose});
    fact("atpose", {o.id, pose});
    if (const Furniture* f = s.region_at(o.pose->position())) fact("on", {o.id, f->id});
  }
  return p;
}

pddl::FactSet ground_truth_state(const Scene& scene) { return project(scene).facts; }

// ---------------------------------------------------------------------------
// World

World::World(Scene scene, std::vector<AnomalyEvent> events, std::uint64_t seed)
    : scene_(std::move(scene)), events_(std::move(events)), done_(events_.size(), false), seed_(seed) {
  scene_.check_invariants();
}

ActuationResult World::execute(const Command& command) {
  ActuationResult r = world::step(scene_, command, hash_combine(seed_, steps_));
  ++steps_;
  if (r.observation) {
    ojson line = observation_to_json(*r.observation);
    line["step"] = steps_;
    log_.push_back(line.dump());
  }
  fire_due_events();
  return r;
}

void World::fire_due_events() {
  for (std::size_t i = 0; i < events_.size(); ++i) {
    if (done_[i]) continue;
    const AnomalyEvent& e = events_[i];
    bool due = e.at_step && *e.at_step == steps_;
    if (!due && e.when) {
      const pddl::FactSet truth = ground_truth_state(scene_);
      due = (truth.count(e.when->atom) != 0) == e.when->positive;
    }
    if (!due) continue;
    apply_event(scene_, e, hash_combine(seed_ ^ kEventSalt, i));
    done_[i] = true;
    fired_.push_back(e.id);
  }
}

Observation World::perceive(const PerceptionQuery& query) {
  Observation o = world::perceive(scene_, query, hash_combine(seed_, 0x9e3779b9ULL + perceptions_++));
  ojson line = observation_to_json(o);
  line["step"] = steps_;
  log_.push_back(line.dump());
  return o;
}

std::string World::observation_log_text() const {
  std::string out;
  for (const std::string& l : log_) out += l + "\n";
  return out;
}

std::string World::snapshot_id() const {
  char buf[24];
  std::snprintf(buf, sizeof buf, "s-%016llx",
                static_cast<unsigned long long>(fnv1a(scene_to_json(scene_).dump())));
  return buf;
}

}  // namespace planact::world
