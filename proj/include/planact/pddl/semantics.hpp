#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "planact/pddl/types.hpp"

namespace planact::pddl {

/// Instantiates `schema` with `args` (one constant per parameter).
/// Throws ArityMismatch when the binding is not total. When `problem` is
/// given, every argument must be a known object whose type conforms to the
/// parameter type (UnknownObject otherwise).
GroundAction ground_action(const Domain& domain, const ActionSchema& schema,
                           const std::vector<std::string>& args, const Problem* problem = nullptr);

/// Looks the schema up by name first.
GroundAction ground_action(const Domain& domain, const std::string& schema,
                           const std::vector<std::string>& args, const Problem* problem = nullptr);

/// pre+ fluent facts must be in `state`, static preconditions in `assumed`
/// (never `state`), and no pre- fact may be in `state`.
bool applicable(const GroundAction& action, const FactSet& state, const FactSet& assumed);

/// (state \ eff-) U eff+. Does not check preconditions.
FactSet apply(const GroundAction& action, const FactSet& state);

/// Like apply(), but throws NotApplicable when the preconditions fail.
FactSet apply_checked(const GroundAction& action, const FactSet& state, const FactSet& assumed);

bool satisfies(const FactSet& state, const std::vector<Literal>& goal);

/// Splits `facts` into the fluent part and the static/unary-type part.
std::pair<FactSet, FactSet> split_by_kind(const Domain& domain, const FactSet& facts);

struct ValidationReport {
  bool ok = false;
  /// 1-based index of the first inapplicable step; 0 if every step applied.
  std::size_t failing_step = 0;
  std::vector<Literal> missing_goal_literals;
  FactSet final_state;
};

/// Independent plan checker. Static facts of the problem's init count as
/// certified and are added to `assumed`.
ValidationReport validate_plan(const Domain& domain, const Problem& problem, const Plan& plan,
                               const FactSet& assumed);

}  // namespace planact::pddl
