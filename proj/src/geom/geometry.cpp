#include "planact/geom/geometry.hpp"

#include <algorithm>

#include "planact/common/text.hpp"

namespace planact::geom {

double wrap_angle(double theta) {
  if (theta >= -kPi && theta < kPi) return theta;
  double t = std::fmod(theta + kPi, 2 * kPi);
  if (t < 0) t += 2 * kPi;
  t -= kPi;
  if (t >= kPi) t -= 2 * kPi;
  return t;
}

const char* to_string(GraspClass c) { return c == GraspClass::Top ? "top" : "forward"; }

const char* kind_name(const GeomValue& v) {
  struct Visitor {
    const char* operator()(const BaseConfig&) const { return "conf"; }
    const char* operator()(const Pose&) const { return "pose"; }
    const char* operator()(const Grasp&) const { return "grasp"; }
    const char* operator()(const Traj&) const { return "traj"; }
    const char* operator()(const Rect&) const { return "region"; }
    const char* operator()(const ObjectShape&) const { return "shape"; }
  };
  return std::visit(Visitor{}, v);
}

std::string describe(const GeomValue& v) {
  auto f = [](double d) { return format_fixed(d, 3); };
  struct Visitor {
    decltype(f)& fmt;
    std::string operator()(const BaseConfig& q) const {
      return "conf(" + fmt(q.x) + "," + fmt(q.y) + "," + fmt(q.theta) + ")";
    }
    std::string operator()(const Pose& p) const {
      return "pose(" + fmt(p.x) + "," + fmt(p.y) + "," + fmt(p.theta) + ")";
    }
    std::string operator()(const Grasp& g) const {
      return std::string("grasp(") + to_string(g.cls) + "," + fmt(g.offset) + ")";
    }
    std::string operator()(const Traj& t) const {
      return "traj(" + std::to_string(t.waypoints.size()) + " waypoints)";
    }
    std::string operator()(const Rect& r) const {
      return "region(" + fmt(r.min.x) + "," + fmt(r.min.y) + "," + fmt(r.max.x) + "," + fmt(r.max.y) + ")";
    }
    std::string operator()(const ObjectShape& s) const {
      return std::string(s.kind == ObjectShape::Kind::Disc ? "disc(" : "square(") + fmt(s.size) + ")";
    }
  };
  return std::visit(Visitor{f}, v);
}

bool is_valid(const GeomValue& v) {
  auto finite = [](double d) { return std::isfinite(d); };
  auto angle_ok = [](double t) { return std::isfinite(t) && t >= -kPi && t < kPi; };
  struct Visitor {
    decltype(finite)& fin;
    decltype(angle_ok)& ang;
    bool operator()(const BaseConfig& q) const { return fin(q.x) && fin(q.y) && ang(q.theta); }
    bool operator()(const Pose& p) const { return fin(p.x) && fin(p.y) && ang(p.theta); }
    bool operator()(const Grasp& g) const { return fin(g.offset); }
    bool operator()(const Traj& t) const {
      return t.waypoints.size() >= 2 && std::all_of(t.waypoints.begin(), t.waypoints.end(),
                                                    [&](Vec2 w) { return fin(w.x) && fin(w.y); });
    }
    bool operator()(const Rect& r) const { return r.width() > 0 && r.height() > 0; }
    bool operator()(const ObjectShape& s) const { return fin(s.size) && s.size > 0; }
  };
  return std::visit(Visitor{finite, angle_ok}, v);
}

double point_rect_distance(Vec2 p, const Rect& r) {
  const double dx = std::max({r.min.x - p.x, 0.0, p.x - r.max.x});
  const double dy = std::max({r.min.y - p.y, 0.0, p.y - r.max.y});
  return std::hypot(dx, dy);
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return distance(p, a + ab * t);
}

namespace {

double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  auto on_segment = [](Vec2 p, Vec2 q, Vec2 r) {
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
           r.y <= std::max(p.y, q.y);
  };
  if (d1 == 0 && on_segment(a, b, c)) return true;
  if (d2 == 0 && on_segment(a, b, d)) return true;
  if (d3 == 0 && on_segment(c, d, a)) return true;
  if (d4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

}  // namespace

double segment_segment_distance(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

double segment_rect_distance(Vec2 a, Vec2 b, const Rect& r) {
  if (r.contains(a, 0.0) || r.contains(b, 0.0)) return 0.0;
  const Vec2 c0 = r.min;
  const Vec2 c1{r.max.x, r.min.y};
  const Vec2 c2 = r.max;
  const Vec2 c3{r.min.x, r.max.y};
  return std::min({segment_segment_distance(a, b, c0, c1), segment_segment_distance(a, b, c1, c2),
                   segment_segment_distance(a, b, c2, c3), segment_segment_distance(a, b, c3, c0)});
}

Rect footprint_box(const ObjectShape& shape, Vec2 at) {
  return {{at.x - shape.size, at.y - shape.size}, {at.x + shape.size, at.y + shape.size}};
}

double point_footprint_distance(Vec2 p, const ObjectShape& shape, Vec2 at) {
  if (shape.kind == ObjectShape::Kind::Disc) return distance(p, at) - shape.size;
  return point_rect_distance(p, footprint_box(shape, at));
}

double segment_footprint_distance(Vec2 a, Vec2 b, const ObjectShape& shape, Vec2 at) {
  if (shape.kind == ObjectShape::Kind::Disc) return point_segment_distance(at, a, b) - shape.size;
  return segment_rect_distance(a, b, footprint_box(shape, at));
}

bool footprints_overlap(const ObjectShape& s1, Vec2 c1, const ObjectShape& s2, Vec2 c2, double clearance) {
  using K = ObjectShape::Kind;
  if (s1.kind == K::Disc && s2.kind == K::Disc) return distance(c1, c2) <= s1.size + s2.size + clearance;
  if (s1.kind == K::Square && s2.kind == K::Square) {
    const double reach = s1.size + s2.size + clearance;
    return std::abs(c1.x - c2.x) <= reach && std::abs(c1.y - c2.y) <= reach;
  }
  const bool first_disc = s1.kind == K::Disc;
  const ObjectShape& disc = first_disc ? s1 : s2;
  const Vec2 disc_at = first_disc ? c1 : c2;
  const ObjectShape& square = first_disc ? s2 : s1;
  const Vec2 square_at = first_disc ? c2 : c1;
  return point_rect_distance(disc_at, footprint_box(square, square_at)) <= disc.size + clearance;
}

}  // namespace planact::geom
