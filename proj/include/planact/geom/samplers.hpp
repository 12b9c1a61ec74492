#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "planact/geom/geometry.hpp"
#include "planact/geom/scene.hpp"

namespace planact::geom {

/// One sampler input: a symbol name plus its geometric value when it has one.
/// Object inputs carry their ObjectShape, region inputs their Rect.
struct SamplerValue {
  std::string name;
  std::optional<GeomValue> geom;
};

using SamplerInputs = std::vector<SamplerValue>;
using SamplerOutputs = std::vector<GeomValue>;

/// psi = <I, O, C, f>. Subclasses enumerate raw candidates; f(index) is the
/// index-th raw candidate that passes C, so every yielded value satisfies C.
class ConditionalSampler {
 public:
  ConditionalSampler(std::string kind, std::size_t capacity, std::shared_ptr<const SceneGeometry> scene)
      : kind_(std::move(kind)), capacity_(capacity), scene_(std::move(scene)) {}
  virtual ~ConditionalSampler() = default;

  const std::string& kind() const { return kind_; }
  std::size_t capacity() const { return capacity_; }
  const SceneGeometry& scene() const { return *scene_; }
  std::shared_ptr<const SceneGeometry> scene_ptr() const { return scene_; }

  virtual std::size_t input_count() const = 0;
  /// Some samplers accept trailing optional inputs.
  virtual std::size_t max_input_count() const { return input_count(); }
  virtual std::size_t raw_count(const SamplerInputs& in) const = 0;
  virtual std::optional<SamplerOutputs> raw_candidate(const SamplerInputs& in, std::uint64_t seed,
                                                      std::size_t raw) const = 0;
  /// C: true if `out` is a valid output tuple for `in`.
  virtual bool check(const SamplerInputs& in, const SamplerOutputs& out) const = 0;

  /// f. nullopt means Exhausted.
  std::optional<SamplerOutputs> sample(const SamplerInputs& in, std::uint64_t seed, std::size_t index) const;

  /// Scans raw candidates from `raw_pos`; on success `raw_pos` points past the
  /// returned candidate.
  std::optional<SamplerOutputs> next_valid(const SamplerInputs& in, std::uint64_t seed,
                                           std::size_t& raw_pos) const;

 private:
  std::string kind_;
  std::size_t capacity_;
  std::shared_ptr<const SceneGeometry> scene_;
};

/// Resumable enumeration of one sampler for fixed inputs and seed.
class SamplerCursor {
 public:
  SamplerCursor(std::shared_ptr<const ConditionalSampler> sampler, SamplerInputs inputs, std::uint64_t seed)
      : sampler_(std::move(sampler)), inputs_(std::move(inputs)), seed_(seed) {}

  std::optional<SamplerOutputs> next();

  bool exhausted() const { return exhausted_; }
  std::size_t next_index() const { return next_index_; }
  std::size_t yielded() const { return yielded_; }
  /// Raw candidates examined so far.
  std::size_t raw_position() const { return raw_pos_; }
  std::uint64_t seed() const { return seed_; }
  const SamplerInputs& inputs() const { return inputs_; }
  const ConditionalSampler& sampler() const { return *sampler_; }

 private:
  std::shared_ptr<const ConditionalSampler> sampler_;
  SamplerInputs inputs_;
  std::uint64_t seed_;
  std::size_t next_index_ = 0;
  std::size_t yielded_ = 0;
  std::size_t raw_pos_ = 0;
  bool exhausted_ = false;
};

// Sampler kinds. Inputs, in order:
//   base_motion   (q1: conf, q2: conf)                        -> (t: traj)
//   grasp         (o: shape)                                  -> (g: grasp)
//   stable_pose   (o: shape, r: region)                       -> (p: pose)
//   ik            (a, o: shape, p: pose, g: grasp, q: conf)   -> (t: traj)
//   view_conf     (r: region [, from: conf])                  -> (q: conf)
//   approach_conf (o: shape, p: pose)                         -> (q: conf)
std::shared_ptr<ConditionalSampler> make_sampler(const std::string& kind,
                                                 std::shared_ptr<const SceneGeometry> scene);
const std::vector<std::string>& sampler_kinds();

/// Maps stream names to sampler instances.
class SamplerRegistry {
 public:
  void add(const std::string& stream, std::shared_ptr<const ConditionalSampler> sampler);
  bool contains(const std::string& stream) const { return samplers_.count(stream) != 0; }
  /// Throws UnknownSampler.
  std::shared_ptr<const ConditionalSampler> get(const std::string& stream) const;
  std::vector<std::string> streams() const;

 private:
  std::map<std::string, std::shared_ptr<const ConditionalSampler>> samplers_;
};

/// Stream name -> sampler kind for the bundled household streams.
const std::map<std::string, std::string>& default_stream_bindings();

SamplerRegistry make_registry(std::shared_ptr<const SceneGeometry> scene,
                              const std::map<std::string, std::string>& bindings = default_stream_bindings());

// Direct entry points ------------------------------------------------------

std::optional<Traj> sample_base_motion(BaseConfig q1, BaseConfig q2, const SceneGeometry& scene);
std::optional<Grasp> sample_grasp(const ObjectShape& o, std::uint64_t seed, std::size_t index,
                                  std::size_t capacity = SamplerCapacities{}.grasp);
std::optional<Pose> sample_stable_pose(const std::string& object_id, const ObjectShape& o, const RegionGeom& r,
                                       const SceneGeometry& scene, std::uint64_t seed, std::size_t index);
std::optional<Traj> sample_ik(const std::string& arm, const std::string& object_id, const ObjectShape& o, Pose p,
                              Grasp g, BaseConfig q, const SceneGeometry& scene, std::uint64_t seed,
                              std::size_t index);

/// World-frame point where the gripper closes for grasp `g` on an object at `p`.
Vec2 grasp_point(Pose p, Grasp g);

}  // namespace planact::geom
