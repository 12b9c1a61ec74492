#include "planact/world/scene.hpp"

#include <algorithm>

#include "planact/common/error.hpp"
#include "planact/common/text.hpp"

namespace planact::world {

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

geom::Vec2 vec_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw SchemaError(std::string(what) + " must be [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

geom::Pose pose_from(const json& j, const char* what) {
  if (!j.is_array() || (j.size() != 2 && j.size() != 3)) {
    throw SchemaError(std::string(what) + " must be [x, y] or [x, y, theta]");
  }
  for (const auto& v : j) {
    if (!v.is_number()) throw SchemaError(std::string(what) + " must be numeric");
  }
  return {j[0].get<double>(), j[1].get<double>(), geom::wrap_angle(j.size() == 3 ? j[2].get<double>() : 0.0)};
}

geom::Rect rect_from(const json& j, const char* what) {
  geom::Rect r{vec_from(j.at("min"), what), vec_from(j.at("max"), what)};
  if (r.width() <= 0 || r.height() <= 0) throw SchemaError(std::string(what) + " must have positive area");
  return r;
}

FurnitureKind kind_from(const std::string& s) {
  if (s == "table") return FurnitureKind::Table;
  if (s == "drawer") return FurnitureKind::Drawer;
  if (s == "cover") return FurnitureKind::Cover;
  if (s == "receptacle") return FurnitureKind::Receptacle;
  throw SchemaError("unknown furniture kind " + s);
}

template <typename T>
void read_param(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

ojson vec_json(geom::Vec2 v) { return ojson::array({v.x, v.y}); }

}  // namespace

const char* to_string(FurnitureKind k) {
  switch (k) {
    case FurnitureKind::Table: return "table";
    case FurnitureKind::Drawer: return "drawer";
    case FurnitureKind::Cover: return "cover";
    case FurnitureKind::Receptacle: return "receptacle";
  }
  return "table";
}

const Furniture* Scene::find_furniture(const std::string& id) const {
  for (const Furniture& f : furniture) {
    if (f.id == id) return &f;
  }
  return nullptr;
}

Furniture* Scene::find_furniture(const std::string& id) {
  return const_cast<Furniture*>(static_cast<const Scene*>(this)->find_furniture(id));
}

const ObjectState* Scene::find_object(const std::string& id) const {
  for (const ObjectState& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

ObjectState* Scene::find_object(const std::string& id) {
  return const_cast<ObjectState*>(static_cast<const Scene*>(this)->find_object(id));
}

const Furniture* Scene::region_at(geom::Vec2 p) const {
  const Furniture* best = nullptr;
  for (const Furniture& f : furniture) {
    if (!f.rect.contains(p)) continue;
    const double area = f.rect.width() * f.rect.height();
    if (best == nullptr || area < best->rect.width() * best->rect.height()) best = &f;
  }
  return best;
}

bool Scene::occluded(const ObjectState& o) const {
  if (!o.pose) return false;
  for (const Furniture& f : furniture) {
    if (f.closed && (f.kind == FurnitureKind::Drawer || f.kind == FurnitureKind::Cover) &&
        f.rect.contains(o.pose->position())) {
      return true;
    }
  }
  return false;
}

void Scene::check_invariants() const {
  std::set<std::string> ids;
  for (const Furniture& f : furniture) {
    if (!ids.insert(f.id).second) throw SchemaError("duplicate id " + f.id);
  }
  for (const ObjectState& o : objects) {
    if (!ids.insert(o.id).second) throw SchemaError("duplicate id " + o.id);
    const bool held = robot.holding == o.id;
    if (held == o.pose.has_value()) {
      throw SchemaError("object " + o.id + (held ? " is held but has a pose" : " has no pose"));
    }
  }
  if (!robot.holding.empty() && find_object(robot.holding) == nullptr) {
    throw SchemaError("robot holds unknown object " + robot.holding);
  }
  for (std::size_t i = 0; i < objects.size(); ++i) {
    for (std::size_t k = i + 1; k < objects.size(); ++k) {
      const ObjectState& a = objects[i];
      const ObjectState& b = objects[k];
      if (a.pose && b.pose &&
          geom::footprints_overlap(a.shape, a.pose->position(), b.shape, b.pose->position())) {
        throw OverlapError(a.id + " overlaps " + b.id);
      }
    }
  }
}

geom::SceneGeometry Scene::geometry() const {
  geom::SceneGeometry g;
  g.workspace = workspace;
  g.params = params;
  g.capacities = capacities;
  for (const Furniture& f : furniture) g.regions.push_back({f.id, f.rect, f.capacity, f.blocks_base});
  for (const ObjectState& o : objects) {
    if (o.pose) g.objects.push_back({o.id, o.shape, *o.pose});
  }
  return g;
}

Scene parse_scene(const json& j) {
  Scene s;
  try {
    if (!j.is_object()) throw SchemaError("scene must be a JSON object");
    if (j.value("schema", 0) != 1) throw SchemaError("unsupported scene schema (expected 1)");
    s.name = j.value("name", "");
    if (j.contains("workspace")) s.workspace = rect_from(j.at("workspace"), "workspace");
    if (j.contains("params")) {
      const json& p = j.at("params");
      read_param(p, "reach", s.params.reach);
      read_param(p, "resolution", s.params.resolution);
      read_param(p, "grid_cell", s.params.grid_cell);
      read_param(p, "robot_radius", s.params.robot_radius);
      read_param(p, "approach_distance", s.params.approach_distance);
      read_param(p, "view_standoff", s.params.view_standoff);
      read_param(p, "sensor_range", s.params.sensor_range);
      read_param(p, "grasp_tolerance", s.params.grasp_tolerance);
      read_param(p, "perception_noise", s.params.perception_noise);
      read_param(p, "motion_noise", s.params.motion_noise);
      read_param(p, "heading_noise", s.params.heading_noise);
    }
    if (j.contains("capacities")) {
      const json& c = j.at("capacities");
      read_param(c, "grasp", s.capacities.grasp);
      read_param(c, "pose", s.capacities.pose);
      read_param(c, "ik", s.capacities.ik);
      read_param(c, "base_motion", s.capacities.base_motion);
      read_param(c, "view", s.capacities.view);
      read_param(c, "approach", s.capacities.approach);
    }
    for (const json& f : j.value("furniture", json::array())) {
      Furniture fu;
      fu.id = to_lower(f.at("id").get<std::string>());
      fu.kind = kind_from(f.at("kind").get<std::string>());
      fu.rect = rect_from(f, ("furniture " + fu.id).c_str());
      fu.appliance = to_lower(f.value("appliance", ""));
      if (!fu.appliance.empty() && fu.appliance != "sink" && fu.appliance != "microwave" &&
          fu.appliance != "stove" && fu.appliance != "fridge") {
        throw SchemaError("unknown appliance " + fu.appliance);
      }
      if (f.contains("capacity") && !f.at("capacity").is_null()) {
        fu.capacity = f.at("capacity").get<std::size_t>();
      } else if (!fu.appliance.empty()) {
        fu.capacity = 1;
      }
      fu.blocks_base = f.value("blocks_base", fu.kind == FurnitureKind::Table || fu.kind == FurnitureKind::Drawer);
      fu.closed = f.value("closed", fu.kind == FurnitureKind::Drawer || fu.kind == FurnitureKind::Cover);
      s.furniture.push_back(std::move(fu));
    }
    for (const json& o : j.value("objects", json::array())) {
      ObjectState ob;
      ob.id = to_lower(o.at("id").get<std::string>());
      const std::string shape = o.value("shape", "disc");
      if (shape != "disc" && shape != "square") throw SchemaError("unknown shape " + shape);
      ob.shape = {shape == "disc" ? geom::ObjectShape::Kind::Disc : geom::ObjectShape::Kind::Square,
                  o.value("size", 0.03)};
      if (ob.shape.size <= 0) throw SchemaError("object " + ob.id + " must have positive size");
      if (o.contains("pose") && !o.at("pose").is_null()) ob.pose = pose_from(o.at("pose"), "object pose");
      for (const json& fl : o.value("flags", json::array())) {
        const std::string flag = to_lower(fl.get<std::string>());
        if (std::find(object_flags().begin(), object_flags().end(), flag) == object_flags().end()) {
          throw SchemaError("unknown object flag " + flag);
        }
        ob.flags.insert(flag);
      }
      s.objects.push_back(std::move(ob));
    }
    if (j.contains("robot")) {
      const json& r = j.at("robot");
      const geom::Pose c = pose_from(r.at("conf"), "robot conf");
      s.robot.conf = {c.x, c.y, c.theta};
      s.robot.arm = to_lower(r.value("arm", "arm"));
      if (r.contains("holding") && !r.at("holding").is_null()) {
        s.robot.holding = to_lower(r.at("holding").get<std::string>());
      }
    }
    for (const json& r : j.value("scanned", json::array())) s.scanned.insert(to_lower(r.get<std::string>()));
  } catch (const json::exception& e) {
    throw SchemaError(std::string("scene: ") + e.what());
  }
  s.check_invariants();
  return s;
}

Scene load_scene(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
  return parse_scene(j);
}

ojson scene_to_json(const Scene& s) {
  ojson j;
  j["schema"] = s.schema;
  j["name"] = s.name;
  j["workspace"] = {{"min", vec_json(s.workspace.min)}, {"max", vec_json(s.workspace.max)}};
  j["params"] = {{"reach", s.params.reach},
                 {"resolution", s.params.resolution},
                 {"grid_cell", s.params.grid_cell},
                 {"robot_radius", s.params.robot_radius},
                 {"approach_distance", s.params.approach_distance},
                 {"view_standoff", s.params.view_standoff},
                 {"sensor_range", s.params.sensor_range},
                 {"grasp_tolerance", s.params.grasp_tolerance},
                 {"perception_noise", s.params.perception_noise},
                 {"motion_noise", s.params.motion_noise},
                 {"heading_noise", s.params.heading_noise}};
  j["capacities"] = {{"grasp", s.capacities.grasp}, {"pose", s.capacities.pose},
                     {"ik", s.capacities.ik},       {"base_motion", s.capacities.base_motion},
                     {"view", s.capacities.view},   {"approach", s.capacities.approach}};
  ojson furniture = ojson::array();
  for (const Furniture& f : s.furniture) {
    ojson fj = {{"id", f.id}, {"kind", to_string(f.kind)}, {"min", vec_json(f.rect.min)}, {"max", vec_json(f.rect.max)}};
    if (!f.appliance.empty()) fj["appliance"] = f.appliance;
    if (f.capacity) fj["capacity"] = *f.capacity;
    fj["blocks_base"] = f.blocks_base;
    fj["closed"] = f.closed;
    furniture.push_back(std::move(fj));
  }
  j["furniture"] = std::move(furniture);
  ojson objects = ojson::array();
  for (const ObjectState& o : s.objects) {
    ojson oj = {{"id", o.id},
                {"shape", o.shape.kind == geom::ObjectShape::Kind::Disc ? "disc" : "square"},
                {"size", o.shape.size}};
    oj["pose"] = o.pose ? ojson::array({o.pose->x, o.pose->y, o.pose->theta}) : ojson();
    oj["flags"] = ojson::array();
    for (const std::string& fl : o.flags) oj["flags"].push_back(fl);
    objects.push_back(std::move(oj));
  }
  j["objects"] = std::move(objects);
  j["robot"] = {{"conf", ojson::array({s.robot.conf.x, s.robot.conf.y, s.robot.conf.theta})},
                {"arm", s.robot.arm},
                {"holding", s.robot.holding.empty() ? ojson() : ojson(s.robot.holding)}};
  j["scanned"] = ojson::array();
  for (const std::string& r : s.scanned) j["scanned"].push_back(r);
  return j;
}

}  // namespace planact::world
