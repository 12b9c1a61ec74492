#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "planact/geom/geometry.hpp"
#include "planact/pddl/types.hpp"

namespace planact::planner {

/// A symbol's type and, when known, its geometric value. Optimistic values
/// are placeholders for deferred stream outputs and carry no geometry.
struct Value {
  std::string type;
  std::optional<geom::GeomValue> geom;
  bool optimistic = false;
};

using ValueMap = std::map<std::string, Value>;

struct DeferralPolicy {
  /// Static predicate names assumed at plan time and verified at execution.
  std::set<std::string> deferred;
  std::size_t max_level = 3;
};

/// Kin, plus every static precondition that mentions a conf-typed parameter
/// which the same action adds in an effect (the move target, for example).
DeferralPolicy default_deferral(const pddl::Domain& domain, std::size_t max_level = 3);

/// Throws UnknownPredicate when a deferred name is not a static predicate.
void check_policy(const pddl::Domain& domain, const DeferralPolicy& policy);

/// Sampler invocation counts per phase.
struct SamplerStats {
  std::size_t plan_phase = 0;
  std::size_t exec_phase = 0;
  std::map<std::string, std::size_t> plan_by_stream;
  std::map<std::string, std::size_t> exec_by_sampler;
};

struct GroundTask {
  pddl::Problem problem;
  pddl::FactSet init;       // fluent part of the problem's init
  pddl::FactSet statics;    // static facts of the problem's init
  pddl::FactSet certified;  // from plan-time stream evaluation
  pddl::FactSet assumed;    // deferred
  std::vector<pddl::GroundAction> actions;  // sorted by (name, args)

  pddl::FactSet all_static() const;
};

/// Grounds every action whose static preconditions are in
/// statics U certified U assumed and whose positive fluent preconditions are
/// relaxed-reachable from init.
GroundTask ground(const pddl::Domain& domain, const pddl::Problem& problem, const pddl::FactSet& certified,
                  const pddl::FactSet& assumed);

}  // namespace planact::planner
