#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "planact/geom/geometry.hpp"
#include "planact/geom/scene.hpp"

namespace planact::world {

enum class FurnitureKind { Table, Drawer, Cover, Receptacle };

const char* to_string(FurnitureKind k);

struct Furniture {
  std::string id;
  FurnitureKind kind = FurnitureKind::Table;
  geom::Rect rect;
  /// "sink", "microwave", "stove", "fridge" or empty.
  std::string appliance;
  std::optional<std::size_t> capacity;
  bool blocks_base = false;
  /// Drawer shut or cover lowered. Closed furniture occludes what it contains.
  bool closed = false;
};

inline const std::vector<std::string>& object_flags() {
  static const std::vector<std::string> flags = {"dirty", "cooked", "heated", "cleaned"};
  return flags;
}

struct ObjectState {
  std::string id;
  geom::ObjectShape shape;
  /// Empty while held.
  std::optional<geom::Pose> pose;
  std::set<std::string> flags;
};

struct Robot {
  geom::BaseConfig conf;
  std::string arm = "arm";
  std::string holding;
  geom::Grasp grasp;
};

struct Scene {
  int schema = 1;
  std::string name;
  geom::Rect workspace{{0, 0}, {6, 6}};
  geom::GeomParams params;
  geom::SamplerCapacities capacities;
  std::vector<Furniture> furniture;
  std::vector<ObjectState> objects;
  Robot robot;
  std::set<std::string> scanned;

  const Furniture* find_furniture(const std::string& id) const;
  Furniture* find_furniture(const std::string& id);
  const ObjectState* find_object(const std::string& id) const;
  ObjectState* find_object(const std::string& id);

  /// Smallest furniture region containing `p`, or nullptr.
  const Furniture* region_at(geom::Vec2 p) const;
  /// True if the object sits inside a closed drawer or under a lowered cover.
  bool occluded(const ObjectState& o) const;

  /// Throws OverlapError / SchemaError when an invariant is broken.
  void check_invariants() const;

  /// Geometry view with every placed object.
  geom::SceneGeometry geometry() const;
};

/// Throws SchemaError (malformed input) or OverlapError.
Scene parse_scene(const nlohmann::json& j);
Scene load_scene(const std::string& path);
nlohmann::ordered_json scene_to_json(const Scene& s);

}  // namespace planact::world
