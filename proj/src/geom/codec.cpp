#include "planact/geom/codec.hpp"

#include "planact/common/error.hpp"

namespace planact::geom {

namespace {

using ojson = nlohmann::ordered_json;

ojson point(Vec2 p) { return ojson::array({p.x, p.y}); }

Vec2 point_from(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw SchemaError("expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

nlohmann::ordered_json to_json(const GeomValue& v) {
  struct Visitor {
    ojson operator()(const BaseConfig& q) const { return {{"type", "conf"}, {"x", q.x}, {"y", q.y}, {"theta", q.theta}}; }
    ojson operator()(const Pose& p) const { return {{"type", "pose"}, {"x", p.x}, {"y", p.y}, {"theta", p.theta}}; }
    ojson operator()(const Grasp& g) const {
      return {{"type", "grasp"}, {"class", to_string(g.cls)}, {"offset", g.offset}};
    }
    ojson operator()(const Traj& t) const {
      ojson pts = ojson::array();
      for (Vec2 w : t.waypoints) pts.push_back(point(w));
      return {{"type", "traj"}, {"waypoints", pts}};
    }
    ojson operator()(const Rect& r) const {
      return {{"type", "region"}, {"min", point(r.min)}, {"max", point(r.max)}};
    }
    ojson operator()(const ObjectShape& s) const {
      return {{"type", "shape"}, {"shape", s.kind == ObjectShape::Kind::Disc ? "disc" : "square"}, {"size", s.size}};
    }
  };
  return std::visit(Visitor{}, v);
}

GeomValue geom_from_json(const nlohmann::json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "conf") return BaseConfig{j.at("x").get<double>(), j.at("y").get<double>(), j.value("theta", 0.0)};
    if (type == "pose") return Pose{j.at("x").get<double>(), j.at("y").get<double>(), j.value("theta", 0.0)};
    if (type == "grasp") {
      const std::string cls = j.at("class").get<std::string>();
      if (cls != "top" && cls != "forward") throw SchemaError("grasp class " + cls);
      return Grasp{cls == "top" ? GraspClass::Top : GraspClass::Forward, j.value("offset", 0.0)};
    }
    if (type == "traj") {
      Traj t;
      for (const auto& w : j.at("waypoints")) t.waypoints.push_back(point_from(w));
      return t;
    }
    if (type == "region") return Rect{point_from(j.at("min")), point_from(j.at("max"))};
    if (type == "shape") {
      const std::string shape = j.at("shape").get<std::string>();
      if (shape != "disc" && shape != "square") throw SchemaError("shape " + shape);
      return ObjectShape{shape == "disc" ? ObjectShape::Kind::Disc : ObjectShape::Kind::Square,
                         j.at("size").get<double>()};
    }
    throw SchemaError("unknown geometric value type " + type);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("geometric value: ") + e.what());
  }
}

}  // namespace planact::geom
