#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "planact/geom/geometry.hpp"

namespace planact::geom {

class SceneGeometry;

/// Uniform grid over the workspace. A cell is free when the robot disc at its
/// center keeps an extra half-diagonal of clearance, so the straight segment
/// between two adjacent free cells is always collision-free.
class OccupancyGrid {
 public:
  explicit OccupancyGrid(const SceneGeometry& scene);

  int cols() const { return cols_; }
  int rows() const { return rows_; }
  double cell() const { return cell_; }
  bool free(int col, int row) const;
  Vec2 center(int col, int row) const;

  /// Shortest grid path from `from` to `to` followed by greedy shortcutting.
  /// Returns waypoints starting at `from` and ending at `to`.
  std::optional<std::vector<Vec2>> plan(const SceneGeometry& scene, Vec2 from, Vec2 to) const;

 private:
  struct Field {
    std::vector<double> cost;
    std::vector<std::int32_t> parent;
  };

  int index(int col, int row) const { return row * cols_ + col; }
  std::optional<int> snap(const SceneGeometry& scene, Vec2 p) const;
  const Field& field_from(int start) const;

  Rect workspace_;
  double cell_;
  int cols_;
  int rows_;
  std::vector<std::uint8_t> free_;
  mutable std::map<int, std::shared_ptr<Field>> fields_;
};

/// Greedy farthest-visible shortcutting of a polyline under `scene`.
std::vector<Vec2> smooth_polyline(const SceneGeometry& scene, const std::vector<Vec2>& points);

}  // namespace planact::geom
