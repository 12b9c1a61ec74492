#include "planact/geom/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "planact/geom/scene.hpp"

namespace planact::geom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kSnapRadius = 4;

}  // namespace

OccupancyGrid::OccupancyGrid(const SceneGeometry& scene)
    : workspace_(scene.workspace), cell_(scene.params.grid_cell) {
  cols_ = std::max(1, static_cast<int>(std::floor(workspace_.width() / cell_)));
  rows_ = std::max(1, static_cast<int>(std::floor(workspace_.height() / cell_)));
  free_.assign(static_cast<std::size_t>(cols_) * rows_, 0);
  const double clearance = scene.params.robot_radius + cell_ * std::sqrt(2.0) / 2 + 1e-9;
  const Rect inner = workspace_.inset(scene.params.robot_radius);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      const Vec2 p = center(c, r);
      bool ok = inner.contains(p, 0.0);
      for (const RegionGeom& g : scene.regions) {
        if (ok && g.blocks_base && point_rect_distance(p, g.rect) < clearance) ok = false;
      }
      free_[index(c, r)] = ok ? 1 : 0;
    }
  }
}

bool OccupancyGrid::free(int col, int row) const {
  return col >= 0 && row >= 0 && col < cols_ && row < rows_ && free_[index(col, row)] != 0;
}

Vec2 OccupancyGrid::center(int col, int row) const {
  return {workspace_.min.x + (col + 0.5) * cell_, workspace_.min.y + (row + 0.5) * cell_};
}

std::optional<int> OccupancyGrid::snap(const SceneGeometry& scene, Vec2 p) const {
  const int pc = static_cast<int>(std::floor((p.x - workspace_.min.x) / cell_));
  const int pr = static_cast<int>(std::floor((p.y - workspace_.min.y) / cell_));
  std::optional<int> best;
  double best_d = kInf;
  for (int r = pr - kSnapRadius; r <= pr + kSnapRadius; ++r) {
    for (int c = pc - kSnapRadius; c <= pc + kSnapRadius; ++c) {
      if (!free(c, r)) continue;
      const double d = distance(p, center(c, r));
      if (d < best_d && scene.base_segment_free(p, center(c, r))) {
        best_d = d;
        best = index(c, r);
      }
    }
  }
  return best;
}

const OccupancyGrid::Field& OccupancyGrid::field_from(int start) const {
  if (auto it = fields_.find(start); it != fields_.end()) return *it->second;
  auto field = std::make_shared<Field>();
  field->cost.assign(free_.size(), kInf);
  field->parent.assign(free_.size(), -1);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  field->cost[start] = 0.0;
  open.push({0.0, start});
  static constexpr int kDc[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int kDr[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  while (!open.empty()) {
    auto [d, cur] = open.top();
    open.pop();
    if (d > field->cost[cur]) continue;
    const int c = cur % cols_;
    const int r = cur / cols_;
    for (int k = 0; k < 8; ++k) {
      const int nc = c + kDc[k];
      const int nr = r + kDr[k];
      if (!free(nc, nr)) continue;
      const double step = k < 4 ? 1.0 : std::sqrt(2.0);
      const int n = index(nc, nr);
      if (d + step < field->cost[n]) {
        field->cost[n] = d + step;
        field->parent[n] = cur;
        open.push({d + step, n});
      }
    }
  }
  return *fields_.emplace(start, std::move(field)).first->second;
}

std::optional<std::vector<Vec2>> OccupancyGrid::plan(const SceneGeometry& scene, Vec2 from, Vec2 to) const {
  if (!scene.base_free(from) || !scene.base_free(to)) return std::nullopt;
  if (scene.base_segment_free(from, to)) return std::vector<Vec2>{from, to};
  const std::optional<int> s = snap(scene, from);
  const std::optional<int> g = snap(scene, to);
  if (!s || !g) return std::nullopt;
  const Field& field = field_from(*s);
  if (field.cost[*g] == kInf) return std::nullopt;
  std::vector<Vec2> cells;
  for (int cur = *g; cur != -1; cur = field.parent[cur]) cells.push_back(center(cur % cols_, cur / cols_));
  std::reverse(cells.begin(), cells.end());
  std::vector<Vec2> points;
  points.reserve(cells.size() + 2);
  points.push_back(from);
  points.insert(points.end(), cells.begin(), cells.end());
  points.push_back(to);
  return smooth_polyline(scene, points);
}

std::vector<Vec2> smooth_polyline(const SceneGeometry& scene, const std::vector<Vec2>& points) {
  if (points.size() <= 2) return points;
  std::vector<Vec2> out{points.front()};
  std::size_t i = 0;
  while (i + 1 < points.size()) {
    std::size_t j = points.size() - 1;
    while (j > i + 1 && !scene.base_segment_free(points[i], points[j])) --j;
    out.push_back(points[j]);
    i = j;
  }
  return out;
}

}  // namespace planact::geom
