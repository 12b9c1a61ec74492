#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "planact/geom/geometry.hpp"

namespace planact::geom {

/// Tunable geometry parameters. Distances in meters, angles in radians.
struct GeomParams {
  double reach = 0.8;
  double resolution = 0.02;
  double grid_cell = 0.05;
  double robot_radius = 0.25;
  double approach_distance = 0.55;
  double view_standoff = 0.45;
  double sensor_range = 1.2;
  double grasp_tolerance = 0.04;
  double gripper_clearance = 0.015;
  double forward_standoff = 0.10;
  double top_standoff = 0.05;
  double perception_noise = 0.01;
  double motion_noise = 0.03;
  double heading_noise = 0.05;
};

struct SamplerCapacities {
  std::size_t grasp = 8;
  std::size_t pose = 32;
  std::size_t ik = 16;
  std::size_t base_motion = 1;
  std::size_t view = 8;
  std::size_t approach = 16;
};

/// Named rectangle: furniture, receptacles, placement surfaces.
struct RegionGeom {
  std::string id;
  Rect rect;
  std::optional<std::size_t> capacity;
  bool blocks_base = false;
};

struct ObjectGeom {
  std::string id;
  ObjectShape shape;
  Pose pose;
};

class OccupancyGrid;

/// Top-down snapshot of everything the samplers need. Built by world-sim from
/// ground truth or from observations.
class SceneGeometry {
 public:
  Rect workspace{{0, 0}, {6, 6}};
  GeomParams params;
  SamplerCapacities capacities;
  std::vector<RegionGeom> regions;
  std::vector<ObjectGeom> objects;

  const RegionGeom* find_region(const std::string& id) const;
  const ObjectGeom* find_object(const std::string& id) const;

  /// Robot disc at `p` stays inside the workspace and clear of blocking regions.
  bool base_free(Vec2 p) const;
  /// Exact sweep of the robot disc along segment ab.
  bool base_segment_free(Vec2 a, Vec2 b) const;
  bool traj_free(const Traj& t) const;

  /// Objects whose center lies in region `r`, excluding `except`.
  std::size_t count_objects_in(const Rect& r, const std::string& except = "") const;

  /// Occupancy grid for base motion; built on first use and cached.
  const OccupancyGrid& grid() const;
  /// Drops the cached grid; call after editing workspace, regions or params.
  void invalidate_grid() { grid_.reset(); }

 private:
  mutable std::shared_ptr<const OccupancyGrid> grid_;
};

}  // namespace planact::geom
