#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace planact::geom {

inline constexpr double kPi = 3.14159265358979323846;

/// Wraps an angle into [-pi, pi).
double wrap_angle(double theta);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  bool operator==(const Vec2&) const = default;
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }
inline Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Mobile base configuration (meters, radians).
struct BaseConfig {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Vec2 position() const { return {x, y}; }
  bool operator==(const BaseConfig&) const = default;
};

/// Planar object pose.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Vec2 position() const { return {x, y}; }
  bool operator==(const Pose&) const = default;
};

enum class GraspClass { Top, Forward };

const char* to_string(GraspClass c);

struct Grasp {
  GraspClass cls = GraspClass::Top;
  double offset = 0.0;  // meters along the object's x axis

  bool operator==(const Grasp&) const = default;
};

/// Polyline path. Waypoints are finite; a valid trajectory has >= 2.
struct Traj {
  std::vector<Vec2> waypoints;

  bool operator==(const Traj&) const = default;
};

/// Axis-aligned rectangle; regions have positive area.
struct Rect {
  Vec2 min;
  Vec2 max;

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  Vec2 center() const { return {(min.x + max.x) / 2, (min.y + max.y) / 2}; }
  bool contains(Vec2 p, double tol = 1e-9) const {
    return p.x >= min.x - tol && p.x <= max.x + tol && p.y >= min.y - tol && p.y <= max.y + tol;
  }
  /// Shrinks (positive) or grows (negative) every side by `margin`.
  Rect inset(double margin) const { return {{min.x + margin, min.y + margin}, {max.x - margin, max.y - margin}}; }
  bool operator==(const Rect&) const = default;
};

/// Object footprint: a disc of `size` radius or an axis-aligned square of
/// `size` half-width.
struct ObjectShape {
  enum class Kind { Disc, Square };
  Kind kind = Kind::Disc;
  double size = 0.03;

  /// Half-extent along x/y used for containment.
  double half_extent() const { return size; }
  double bounding_radius() const { return kind == Kind::Disc ? size : size * std::sqrt(2.0); }
  bool operator==(const ObjectShape&) const = default;
};

using GeomValue = std::variant<BaseConfig, Pose, Grasp, Traj, Rect, ObjectShape>;

/// Short type label: "conf", "pose", "grasp", "traj", "region", "shape".
const char* kind_name(const GeomValue& v);

/// Human-readable rendering, e.g. "pose(0.520,1.100,0.000)".
std::string describe(const GeomValue& v);

/// Checks the per-type invariants (finite values, >= 2 waypoints, positive
/// region area, theta in [-pi, pi)).
bool is_valid(const GeomValue& v);

// Distance queries --------------------------------------------------------

double point_rect_distance(Vec2 p, const Rect& r);
double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);
double segment_segment_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d);
/// Exact Euclidean distance between segment ab and rectangle r (0 if they touch).
double segment_rect_distance(Vec2 a, Vec2 b, const Rect& r);

/// Distance between a point and an object footprint centered at `at`
/// (negative inside a disc, 0 inside a square).
double point_footprint_distance(Vec2 p, const ObjectShape& shape, Vec2 at);
double segment_footprint_distance(Vec2 a, Vec2 b, const ObjectShape& shape, Vec2 at);
/// True if the two footprints intersect (touching counts as overlap).
bool footprints_overlap(const ObjectShape& s1, Vec2 c1, const ObjectShape& s2, Vec2 c2, double clearance = 0.0);
Rect footprint_box(const ObjectShape& shape, Vec2 at);

}  // namespace planact::geom
