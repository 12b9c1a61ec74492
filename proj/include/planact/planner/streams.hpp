#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "planact/geom/samplers.hpp"
#include "planact/planner/task.hpp"

namespace planact::planner {

struct StreamOutcome {
  pddl::FactSet certified;
  pddl::FactSet assumed;
  std::vector<pddl::TypedName> new_objects;
  std::size_t levels = 0;
};

/// Level-by-level stream evaluation. Each level evaluates every stream
/// instance whose domain literals hold over the facts known before the level,
/// drawing one value from its cursor.
class StreamInstantiator {
 public:
  StreamInstantiator(const pddl::Domain& domain, const pddl::Problem& problem,
                     const std::vector<pddl::StreamSpec>& streams, const geom::SamplerRegistry& samplers,
                     const DeferralPolicy& policy, ValueMap& values, std::uint64_t seed,
                     SamplerStats* stats = nullptr);

  /// Runs one level; returns the number of new facts.
  std::size_t run_level();

  const StreamOutcome& outcome() const { return outcome_; }
  /// Problem extended with every object created so far.
  const pddl::Problem& problem() const { return problem_; }

 private:
  struct Instance {
    const pddl::StreamSpec* spec;
    std::vector<std::string> inputs;
    bool deferred = false;
    bool done = false;
    std::unique_ptr<geom::SamplerCursor> cursor;
  };

  std::vector<std::vector<std::string>> bindings_for(const pddl::StreamSpec& spec) const;
  std::string fresh_name(const std::string& var, bool optimistic);
  bool add_fact(const pddl::Fact& f, bool assumed);

  const pddl::Domain& domain_;
  pddl::Problem problem_;
  const std::vector<pddl::StreamSpec>& streams_;
  const geom::SamplerRegistry& samplers_;
  DeferralPolicy policy_;
  ValueMap& values_;
  std::uint64_t seed_;
  SamplerStats* stats_;
  StreamOutcome outcome_;
  pddl::FactSet known_;  // init statics U certified U assumed
  std::map<std::string, Instance> instances_;
  std::map<std::string, std::size_t> name_counters_;
};

/// Runs policy.max_level levels. Throws LevelBudgetExhausted when a level adds
/// nothing while some goal literal is still relaxed-unreachable.
StreamOutcome instantiate_streams(const pddl::Domain& domain, const pddl::Problem& problem,
                                  const std::vector<pddl::StreamSpec>& streams,
                                  const geom::SamplerRegistry& samplers, const DeferralPolicy& policy,
                                  ValueMap& values, std::uint64_t seed = 0, SamplerStats* stats = nullptr);

/// True if every positive goal literal is reachable under the delete
/// relaxation (negative goals are not checked).
bool relaxed_goal_reachable(const pddl::Domain& domain, const pddl::Problem& problem,
                            const pddl::FactSet& certified, const pddl::FactSet& assumed);

}  // namespace planact::planner
