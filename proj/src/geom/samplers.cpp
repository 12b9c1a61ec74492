#include "planact/geom/samplers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "planact/common/error.hpp"
#include "planact/common/random.hpp"
#include "planact/geom/grid.hpp"

namespace planact::geom {

namespace {

constexpr double kEndpointTol = 1e-6;
constexpr double kPlacementClearance = 0.005;

template <typename T>
const T& geom_as(const SamplerInputs& in, std::size_t i, const char* what) {
  if (i >= in.size() || !in[i].geom || !std::holds_alternative<T>(*in[i].geom)) {
    throw SchemaError(std::string("sampler input ") + std::to_string(i) + " must be a " + what);
  }
  return std::get<T>(*in[i].geom);
}

ObjectShape shape_input(const SamplerInputs& in, std::size_t i, const SceneGeometry& scene) {
  if (i < in.size() && in[i].geom && std::holds_alternative<ObjectShape>(*in[i].geom)) {
    return std::get<ObjectShape>(*in[i].geom);
  }
  if (i < in.size()) {
    if (const ObjectGeom* o = scene.find_object(in[i].name)) return o->shape;
  }
  throw SchemaError("sampler input " + std::to_string(i) + " must be an object shape");
}

Rect region_input(const SamplerInputs& in, std::size_t i, const SceneGeometry& scene) {
  if (i < in.size() && in[i].geom && std::holds_alternative<Rect>(*in[i].geom)) {
    return std::get<Rect>(*in[i].geom);
  }
  if (i < in.size()) {
    if (const RegionGeom* r = scene.find_region(in[i].name)) return r->rect;
  }
  throw SchemaError("sampler input " + std::to_string(i) + " must be a region");
}

bool near(Vec2 a, Vec2 b, double tol) { return distance(a, b) <= tol; }

double heading_towards(Vec2 from, Vec2 to) {
  const Vec2 d = to - from;
  if (d.norm() == 0.0) return 0.0;
  return wrap_angle(std::atan2(d.y, d.x));
}

// --- base motion -----------------------------------------------------------

class BaseMotionSampler final : public ConditionalSampler {
 public:
  explicit BaseMotionSampler(std::shared_ptr<const SceneGeometry> scene)
      : ConditionalSampler("base_motion", scene->capacities.base_motion, scene) {}

  std::size_t input_count() const override { return 2; }
  std::size_t raw_count(const SamplerInputs&) const override { return 1; }

  std::optional<SamplerOutputs> raw_candidate(const SamplerInputs& in, std::uint64_t,
                                              std::size_t raw) const override {
    if (raw != 0) return std::nullopt;
    const Vec2 a = geom_as<BaseConfig>(in, 0, "conf").position();
    const Vec2 b = geom_as<BaseConfig>(in, 1, "conf").position();
    if (a == b) {
      if (!scene().base_free(a)) return std::nullopt;
      return SamplerOutputs{Traj{{a, a}}};
    }
    std::optional<std::vector<Vec2>> path = scene().grid().plan(scene(), a, b);
    if (!path) return std::nullopt;
    return SamplerOutputs{Traj{std::move(*path)}};
  }

  bool check(const SamplerInputs& in, const SamplerOutputs& out) const override {
    if (out.size() != 1 || !std::holds_alternative<Traj>(out[0])) return false;
    const Traj& t = std::get<Traj>(out[0]);
    if (t.waypoints.size() < 2) return false;
    const Vec2 a = geom_as<BaseConfig>(in, 0, "conf").position();
    const Vec2 b = geom_as<BaseConfig>(in, 1, "conf").position();
    return near(t.waypoints.front(), a, kEndpointTol) && near(t.waypoints.back(), b, kEndpointTol) &&
           scene().traj_free(t);
  }
};

// --- grasp -----------------------------------------------------------------

std::array<Grasp, 8> grasp_candidates(const ObjectShape& o, std::uint64_t seed) {
  const double step = o.half_extent() / 4;
  std::array<Grasp, 8> c{};
  const double offsets[4] = {0.0, step, -step, 2 * step};
  for (int i = 0; i < 4; ++i) {
    c[i] = {GraspClass::Top, offsets[i]};
    c[4 + i] = {GraspClass::Forward, offsets[i]};
  }
  if (seed != 0) {
    Rng rng(seed);
    for (std::size_t i = c.size() - 1; i > 1; --i) {
      const std::size_t j = 1 + rng.below(i);
      std::swap(c[i], c[j]);
    }
  }
  return c;
}

class GraspSampler final : public ConditionalSampler {
 public:
  explicit GraspSampler(std::shared_ptr<const SceneGeometry> scene)
      : ConditionalSampler("grasp", scene->capacities.grasp, scene) {}

  std::size_t input_count() const override { return 1; }
  std::size_t raw_count(const SamplerInputs&) const override { return 8; }

  std::optional<SamplerOutputs> raw_candidate(const SamplerInputs& in, std::uint64_t seed,
                                              std::size_t raw) const override {
    if (raw >= 8) return std::nullopt;
    return SamplerOutputs{grasp_candidates(shape_input(in, 0, scene()), seed)[raw]};
  }

  bool check(const SamplerInputs& in, const SamplerOutputs& out) const override {
    if (out.size() != 1 || !std::holds_alternative<Grasp>(out[0])) return false;
    const Grasp& g = std::get<Grasp>(out[0]);
    return std::isfinite(g.offset) && std::abs(g.offset) <= shape_input(in, 0, scene()).half_extent() + 1e-12;
  }
};

// --- stable pose -----------------------------------------------------------

class StablePoseSampler final : public ConditionalSampler {
 public:
  explicit StablePoseSampler(std::shared_ptr<const SceneGeometry> scene)
      : ConditionalSampler("stable_pose", scene->capacities.pose, scene) {}

  std::size_t input_count() const override { return 2; }
  std::size_t raw_count(const SamplerInputs&) const override { return 4 * capacity(); }

  std::optional<SamplerOutputs> raw_candidate(const SamplerInputs& in, std::uint64_t seed,
                                              std::size_t raw) const override {
    const ObjectShape o = shape_input(in, 0, scene());
    const Rect area = region_input(in, 1, scene()).inset(o.half_extent());
    const double w = area.width();
    const double h = area.height();
    if (w < -1e-12 || h < -1e-12) return std::nullopt;
    if (raw == 0) return SamplerOutputs{Pose{area.center().x, area.center().y, 0.0}};
    if (w <= 1e-12 && h <= 1e-12) return std::nullopt;
    const double u = halton(raw, 2, seed);
    const double v = halton(raw, 3, seed);
    return SamplerOutputs{Pose{area.min.x + u * std::max(w, 0.0), area.min.y + v * std::max(h, 0.0), 0.0}};
  }

  bool check(const SamplerInputs& in, const SamplerOutputs& out) const override {
    if (out.size() != 1 || !std::holds_alternative<Pose>(out[0])) return false;
    const Pose& p = std::get<Pose>(out[0]);
    const ObjectShape o = shape_input(in, 0, scene());
    const Rect region = region_input(in, 1, scene());
    const Rect area = region.inset(o.half_extent());
    if (area.width() < -1e-12 || area.height() < -1e-12 || !area.contains(p.position(), 1e-9)) return false;
    // A pose inside a smaller region nested in this one belongs to that region.
    for (const RegionGeom& sub : scene().regions) {
      if (sub.id == in[1].name || !sub.rect.contains(p.position())) continue;
      if (sub.rect.width() * sub.rect.height() < region.width() * region.height()) return false;
    }
    const std::string& self = in[0].name;
    for (const ObjectGeom& other : scene().objects) {
      if (other.id == self) continue;
      if (footprints_overlap(o, p.position(), other.shape, other.pose.position(), kPlacementClearance)) {
        return false;
      }
    }
    if (const RegionGeom* r = scene().find_region(in[1].name); r != nullptr && r->capacity) {
      if (scene().count_objects_in(region, self) >= *r->capacity) return false;
    }
    return true;
  }
};

// --- inverse kinematics ----------------------------------------------------

constexpr double kIkAngleTol = 0.02;

// Approach-direction offsets relative to the base-to-grasp ray. Offset 0 is
// always first; the seed permutes the rest.
double ik_offset(std::size_t k) { return (radical_inverse(k + 1, 2) - 0.5) * (2 * kPi / 3); }

std::size_t ik_slot(std::size_t raw, std::size_t capacity, std::uint64_t seed) {
  if (seed == 0 || raw == 0) return raw;
  std::vector<std::size_t> order(capacity);
  for (std::size_t i = 0; i < capacity; ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t i = capacity - 1; i > 1; --i) std::swap(order[i], order[1 + rng.below(i)]);
  return order[raw];
}

class IkSampler final : public ConditionalSampler {
 public:
  explicit IkSampler(std::shared_ptr<const SceneGeometry> scene)
      : ConditionalSampler("ik", scene->capacities.ik, scene) {}

  std::size_t input_count() const override { return 5; }
  std::size_t raw_count(const SamplerInputs&) const override { return capacity(); }

  std::optional<SamplerOutputs> raw_candidate(const SamplerInputs& in, std::uint64_t seed,
                                              std::size_t raw) const override {
    const Pose& p = geom_as<Pose>(in, 2, "pose");
    const Grasp& g = geom_as<Grasp>(in, 3, "grasp");
    const BaseConfig& q = geom_as<BaseConfig>(in, 4, "conf");
    const Vec2 gp = grasp_point(p, g);
    if (raw >= capacity()) return std::nullopt;
    const double phi = heading_towards(q.position(), gp) + ik_offset(ik_slot(raw, capacity(), seed));
    const double standoff =
        g.cls == GraspClass::Forward ? scene().params.forward_standoff : scene().params.top_standoff;
    const Vec2 pre = gp - unit(phi) * standoff;
    return SamplerOutputs{Traj{{pre, gp}}};
  }

  bool check(const SamplerInputs& in, const SamplerOutputs& out) const override {
    if (out.size() != 1 || !std::holds_alternative<Traj>(out[0])) return false;
    const Traj& t = std::get<Traj>(out[0]);
    if (t.waypoints.size() != 2) return false;
    const GeomParams& prm = scene().params;
    const ObjectShape o = shape_input(in, 1, scene());
    const Pose& p = geom_as<Pose>(in, 2, "pose");
    const Grasp& g = geom_as<Grasp>(in, 3, "grasp");
    const Vec2 base = geom_as<BaseConfig>(in, 4, "conf").position();
    const Vec2 pre = t.waypoints[0];
    const Vec2 end = t.waypoints[1];
    if (!near(end, grasp_point(p, g), prm.grasp_tolerance / 2)) return false;
    const double standoff = g.cls == GraspClass::Forward ? prm.forward_standoff : prm.top_standoff;
    if (std::abs(distance(pre, end) - standoff) > kEndpointTol) return false;
    if (distance(base, p.position()) > prm.reach || distance(base, end) > prm.reach ||
        distance(base, pre) > prm.reach) {
      return false;
    }
    // The approach direction is tied to the base: it must be one of the
    // enumerated offsets from the base-to-grasp ray.
    const double rel = wrap_angle(heading_towards(pre, end) - heading_towards(base, end));
    bool aligned = false;
    for (std::size_t k = 0; k < capacity() && !aligned; ++k) {
      aligned = std::abs(wrap_angle(rel - ik_offset(k))) <= kIkAngleTol;
    }
    if (!aligned) return false;
    // Forward grasps sweep the approach segment; top grasps open the fingers
    // across the approach direction at the grasp point.
    Vec2 a = pre;
    Vec2 b = end;
    if (g.cls == GraspClass::Top) {
      const Vec2 dir = (end - pre) * (1.0 / standoff);
      const Vec2 perp{-dir.y, dir.x};
      const double half = o.bounding_radius() + prm.gripper_clearance;
      a = end - perp * half;
      b = end + perp * half;
    }
    for (const ObjectGeom& other : scene().objects) {
      if (other.id == in[1].name) continue;
      if (segment_footprint_distance(a, b, other.shape, other.pose.position()) < prm.gripper_clearance) {
        return false;
      }
    }
    return true;
  }
};

// --- viewpoints --------------------------------------------------------------

class ViewConfSampler final : public ConditionalSampler {
 public:
  explicit ViewConfSampler(std::shared_ptr<const SceneGeometry> scene)
      : ConditionalSampler("view_conf", scene->capacities.view, scene) {}

  std::size_t input_count() const override { return 1; }
  std::size_t max_input_count() const override { return 2; }
  std::size_t raw_count(const SamplerInputs&) const override { return capacity(); }

  // Enumerates clockwise starting from the side facing `from` (or the
  // workspace center when no approach side is given).
  std::optional<SamplerOutputs> raw_candidate(const SamplerInputs& in, std::uint64_t,
                                              std::size_t raw) const override {
    if (raw >= capacity()) return std::nullopt;
    const Rect r = region_input(in, 0, scene());
    const Vec2 c = r.center();
    Vec2 side = scene().workspace.center();
    if (in.size() > 1) side = geom_as<BaseConfig>(in, 1, "conf").position();
    const double phi0 = heading_towards(c, side);
    const double phi = phi0 - 2 * kPi * static_cast<double>(raw) / static_cast<double>(capacity());
    const double s = scene().params.view_standoff;
    const Vec2 d = unit(phi);
    double t = std::numeric_limits<double>::infinity();
    if (std::abs(d.x) > 1e-12) t = std::min(t, (r.width() / 2 + s) / std::abs(d.x));
    if (std::abs(d.y) > 1e-12) t = std::min(t, (r.height() / 2 + s) / std::abs(d.y));
    const Vec2 pos = c + d * t;
    return SamplerOutputs{BaseConfig{pos.x, pos.y, heading_towards(pos, c)}};
  }

  bool check(const SamplerInputs& in, const SamplerOutputs& out) const override {
    if (out.size() != 1 || !std::holds_alternative<BaseConfig>(out[0])) return false;
    const BaseConfig& q = std::get<BaseConfig>(out[0]);
    const Rect r = region_input(in, 0, scene());
    return scene().base_free(q.position()) &&
           point_rect_distance(q.position(), r) <= scene().params.sensor_range;
  }
};

// --- approach configurations -------------------------------------------------

double outward_heading(const SceneGeometry& scene, Vec2 p) {
  for (const RegionGeom& r : scene.regions) {
    if (!r.blocks_base || !r.rect.contains(p)) continue;
    const double gaps[4] = {r.rect.max.x - p.x, p.x - r.rect.min.x, r.rect.max.y - p.y, p.y - r.rect.min.y};
    const double headings[4] = {0.0, -kPi, kPi / 2, -kPi / 2};
    const std::size_t best = static_cast<std::size_t>(std::min_element(gaps, gaps + 4) - gaps);
    return headings[best];
  }
  return heading_towards(scene.workspace.center(), p);
}

class ApproachConfSampler final : public ConditionalSampler {
 public:
  explicit ApproachConfSampler(std::shared_ptr<const SceneGeometry> scene)
      : ConditionalSampler("approach_conf", scene->capacities.approach, scene) {}

  std::size_t input_count() const override { return 2; }
  std::size_t raw_count(const SamplerInputs&) const override { return capacity(); }

  std::optional<SamplerOutputs> raw_candidate(const SamplerInputs& in, std::uint64_t,
                                              std::size_t raw) const override {
    if (raw >= capacity()) return std::nullopt;
    const Pose& p = geom_as<Pose>(in, 1, "pose");
    const double step = 2 * kPi / static_cast<double>(capacity());
    const double m = static_cast<double>((raw + 1) / 2);
    const double phi = outward_heading(scene(), p.position()) + (raw % 2 == 1 ? m : -m) * step;
    const Vec2 pos = p.position() + unit(phi) * scene().params.approach_distance;
    return SamplerOutputs{BaseConfig{pos.x, pos.y, heading_towards(pos, p.position())}};
  }

  bool check(const SamplerInputs& in, const SamplerOutputs& out) const override {
    if (out.size() != 1 || !std::holds_alternative<BaseConfig>(out[0])) return false;
    const BaseConfig& q = std::get<BaseConfig>(out[0]);
    const Pose& p = geom_as<Pose>(in, 1, "pose");
    return scene().base_free(q.position()) && distance(q.position(), p.position()) <= scene().params.reach;
  }
};

std::shared_ptr<const SceneGeometry> borrow(const SceneGeometry& scene) {
  return std::shared_ptr<const SceneGeometry>(&scene, [](const SceneGeometry*) {});
}

}  // namespace

std::optional<SamplerOutputs> ConditionalSampler::next_valid(const SamplerInputs& in, std::uint64_t seed,
                                                             std::size_t& raw_pos) const {
  if (in.size() < input_count() || in.size() > max_input_count()) {
    throw ArityMismatch(kind_ + " sampler expects " + std::to_string(input_count()) + " inputs");
  }
  const std::size_t n = raw_count(in);
  while (raw_pos < n) {
    std::optional<SamplerOutputs> c = raw_candidate(in, seed, raw_pos++);
    if (c && check(in, *c)) return c;
  }
  return std::nullopt;
}

std::optional<SamplerOutputs> ConditionalSampler::sample(const SamplerInputs& in, std::uint64_t seed,
                                                         std::size_t index) const {
  if (index >= capacity_) return std::nullopt;
  std::size_t raw = 0;
  for (std::size_t i = 0;; ++i) {
    std::optional<SamplerOutputs> out = next_valid(in, seed, raw);
    if (!out || i == index) return out;
  }
}

std::optional<SamplerOutputs> SamplerCursor::next() {
  if (exhausted_) return std::nullopt;
  if (next_index_ >= sampler_->capacity()) {
    exhausted_ = true;
    return std::nullopt;
  }
  std::optional<SamplerOutputs> out = sampler_->next_valid(inputs_, seed_, raw_pos_);
  if (!out) {
    exhausted_ = true;
    return std::nullopt;
  }
  ++next_index_;
  ++yielded_;
  return out;
}

const std::vector<std::string>& sampler_kinds() {
  static const std::vector<std::string> kinds = {"base_motion", "grasp", "stable_pose",
                                                 "ik", "view_conf", "approach_conf"};
  return kinds;
}

std::shared_ptr<ConditionalSampler> make_sampler(const std::string& kind,
                                                 std::shared_ptr<const SceneGeometry> scene) {
  if (kind == "base_motion") return std::make_shared<BaseMotionSampler>(std::move(scene));
  if (kind == "grasp") return std::make_shared<GraspSampler>(std::move(scene));
  if (kind == "stable_pose") return std::make_shared<StablePoseSampler>(std::move(scene));
  if (kind == "ik") return std::make_shared<IkSampler>(std::move(scene));
  if (kind == "view_conf") return std::make_shared<ViewConfSampler>(std::move(scene));
  if (kind == "approach_conf") return std::make_shared<ApproachConfSampler>(std::move(scene));
  throw UnknownSampler(kind);
}

void SamplerRegistry::add(const std::string& stream, std::shared_ptr<const ConditionalSampler> sampler) {
  samplers_[stream] = std::move(sampler);
}

std::shared_ptr<const ConditionalSampler> SamplerRegistry::get(const std::string& stream) const {
  auto it = samplers_.find(stream);
  if (it == samplers_.end()) throw UnknownSampler(stream);
  return it->second;
}

std::vector<std::string> SamplerRegistry::streams() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : samplers_) out.push_back(name);
  return out;
}

const std::map<std::string, std::string>& default_stream_bindings() {
  static const std::map<std::string, std::string> bindings = {
      {"plan-base-motion", "base_motion"},  {"sample-grasp", "grasp"},
      {"sample-pose", "stable_pose"},       {"inverse-kinematics", "ik"},
      {"sample-view-conf", "view_conf"},    {"sample-approach-conf", "approach_conf"},
  };
  return bindings;
}

SamplerRegistry make_registry(std::shared_ptr<const SceneGeometry> scene,
                              const std::map<std::string, std::string>& bindings) {
  SamplerRegistry reg;
  for (const auto& [stream, kind] : bindings) reg.add(stream, make_sampler(kind, scene));
  return reg;
}

Vec2 grasp_point(Pose p, Grasp g) { return p.position() + unit(p.theta) * g.offset; }

std::optional<Traj> sample_base_motion(BaseConfig q1, BaseConfig q2, const SceneGeometry& scene) {
  BaseMotionSampler s(borrow(scene));
  auto out = s.sample({{"q1", q1}, {"q2", q2}}, 0, 0);
  if (!out) return std::nullopt;
  return std::get<Traj>(out->front());
}

std::optional<Grasp> sample_grasp(const ObjectShape& o, std::uint64_t seed, std::size_t index,
                                  std::size_t capacity) {
  if (index >= capacity) return std::nullopt;
  auto scene = std::make_shared<SceneGeometry>();
  scene->capacities.grasp = capacity;
  GraspSampler s(scene);
  auto out = s.sample({{"o", o}}, seed, index);
  if (!out) return std::nullopt;
  return std::get<Grasp>(out->front());
}

std::optional<Pose> sample_stable_pose(const std::string& object_id, const ObjectShape& o, const RegionGeom& r,
                                       const SceneGeometry& scene, std::uint64_t seed, std::size_t index) {
  StablePoseSampler s(borrow(scene));
  auto out = s.sample({{object_id, o}, {r.id, r.rect}}, seed, index);
  if (!out) return std::nullopt;
  return std::get<Pose>(out->front());
}

std::optional<Traj> sample_ik(const std::string& arm, const std::string& object_id, const ObjectShape& o, Pose p,
                              Grasp g, BaseConfig q, const SceneGeometry& scene, std::uint64_t seed,
                              std::size_t index) {
  IkSampler s(borrow(scene));
  auto out = s.sample({{arm, std::nullopt}, {object_id, o}, {"p", p}, {"g", g}, {"q", q}}, seed, index);
  if (!out) return std::nullopt;
  return std::get<Traj>(out->front());
}

}  // namespace planact::geom
