#include "planact/geom/scene.hpp"

#include "planact/geom/grid.hpp"

namespace planact::geom {

const RegionGeom* SceneGeometry::find_region(const std::string& id) const {
  for (const RegionGeom& r : regions) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

const ObjectGeom* SceneGeometry::find_object(const std::string& id) const {
  for (const ObjectGeom& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

bool SceneGeometry::base_free(Vec2 p) const {
  if (!workspace.inset(params.robot_radius).contains(p)) return false;
  for (const RegionGeom& r : regions) {
    if (r.blocks_base && point_rect_distance(p, r.rect) < params.robot_radius) return false;
  }
  return true;
}

bool SceneGeometry::base_segment_free(Vec2 a, Vec2 b) const {
  // The inset workspace is convex, so checking both endpoints covers the segment.
  const Rect inner = workspace.inset(params.robot_radius);
  if (!inner.contains(a) || !inner.contains(b)) return false;
  for (const RegionGeom& r : regions) {
    if (r.blocks_base && segment_rect_distance(a, b, r.rect) < params.robot_radius) return false;
  }
  return true;
}

bool SceneGeometry::traj_free(const Traj& t) const {
  if (t.waypoints.empty()) return false;
  if (t.waypoints.size() == 1) return base_free(t.waypoints.front());
  for (std::size_t i = 0; i + 1 < t.waypoints.size(); ++i) {
    if (!base_segment_free(t.waypoints[i], t.waypoints[i + 1])) return false;
  }
  return true;
}

std::size_t SceneGeometry::count_objects_in(const Rect& r, const std::string& except) const {
  std::size_t n = 0;
  for (const ObjectGeom& o : objects) {
    if (o.id != except && r.contains(o.pose.position())) ++n;
  }
  return n;
}

const OccupancyGrid& SceneGeometry::grid() const {
  if (!grid_) grid_ = std::make_shared<const OccupancyGrid>(*this);
  return *grid_;
}

}  // namespace planact::geom
