#include "planact/pddl/semantics.hpp"

#include <algorithm>
#include <map>

#include "planact/common/error.hpp"

namespace planact::pddl {

namespace {

Fact substitute(const Atom& atom, const std::map<std::string, std::string>& binding) {
  Fact f{atom.predicate, {}};
  f.args.reserve(atom.args.size());
  for (const std::string& a : atom.args) {
    auto it = binding.find(a);
    f.args.push_back(it == binding.end() ? a : it->second);
  }
  return f;
}

bool contains(const FactSet& set, const Fact& f) { return set.find(f) != set.end(); }

}  // namespace

GroundAction ground_action(const Domain& domain, const ActionSchema& schema,
                           const std::vector<std::string>& args, const Problem* problem) {
  if (args.size() != schema.params.size()) {
    throw ArityMismatch(schema.name + " expects " + std::to_string(schema.params.size()) +
                        " arguments, got " + std::to_string(args.size()));
  }
  std::map<std::string, std::string> binding;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (problem != nullptr) {
      std::optional<std::string> type = problem->object_type(args[i]);
      if (!type) {
        for (const TypedName& c : domain.constants) {
          if (c.name == args[i]) type = c.type;
        }
      }
      if (!type) throw UnknownObject(args[i] + " in " + schema.name);
      if (!domain.is_subtype(*type, schema.params[i].type)) {
        throw UnknownObject(args[i] + " is a " + *type + ", not a " + schema.params[i].type);
      }
    }
    binding[schema.params[i].name] = args[i];
  }
  GroundAction g;
  g.schema = schema.name;
  g.args = args;
  for (const Atom& a : schema.pre_plus) g.pre_plus.insert(substitute(a, binding));
  for (const Atom& a : schema.pre_minus) g.pre_minus.insert(substitute(a, binding));
  for (const Atom& a : schema.static_pre) g.static_pre.insert(substitute(a, binding));
  for (const Atom& a : schema.eff_plus) g.eff_plus.insert(substitute(a, binding));
  for (const Atom& a : schema.eff_minus) g.eff_minus.insert(substitute(a, binding));
  return g;
}

GroundAction ground_action(const Domain& domain, const std::string& schema,
                           const std::vector<std::string>& args, const Problem* problem) {
  const ActionSchema* s = domain.find_action(schema);
  if (s == nullptr) throw UnknownObject("action " + schema);
  return ground_action(domain, *s, args, problem);
}

bool applicable(const GroundAction& action, const FactSet& state, const FactSet& assumed) {
  for (const Fact& f : action.pre_plus) {
    if (!contains(state, f)) return false;
  }
  for (const Fact& f : action.static_pre) {
    if (!contains(assumed, f)) return false;
  }
  for (const Fact& f : action.pre_minus) {
    if (contains(state, f)) return false;
  }
  return true;
}

FactSet apply(const GroundAction& action, const FactSet& state) {
  FactSet next;
  for (const Fact& f : state) {
    if (!contains(action.eff_minus, f)) next.insert(f);
  }
  next.insert(action.eff_plus.begin(), action.eff_plus.end());
  return next;
}

FactSet apply_checked(const GroundAction& action, const FactSet& state, const FactSet& assumed) {
  if (!applicable(action, state, assumed)) throw NotApplicable(action.to_string());
  return pddl::apply(action, state);
}

bool satisfies(const FactSet& state, const std::vector<Literal>& goal) {
  return std::all_of(goal.begin(), goal.end(),
                     [&](const Literal& l) { return contains(state, l.atom) == l.positive; });
}

std::pair<FactSet, FactSet> split_by_kind(const Domain& domain, const FactSet& facts) {
  std::pair<FactSet, FactSet> out;
  for (const Fact& f : facts) {
    (domain.is_fluent(f.predicate) ? out.first : out.second).insert(f);
  }
  return out;
}

ValidationReport validate_plan(const Domain& domain, const Problem& problem, const Plan& plan,
                               const FactSet& assumed) {
  ValidationReport report;
  auto [state, statics] = split_by_kind(domain, problem.init);
  statics.insert(assumed.begin(), assumed.end());
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    if (!applicable(plan.steps[i], state, statics)) {
      report.failing_step = i + 1;
      report.final_state = std::move(state);
      return report;
    }
    state = pddl::apply(plan.steps[i], state);
  }
  for (const Literal& l : problem.goal) {
    if (contains(state, l.atom) != l.positive) report.missing_goal_literals.push_back(l);
  }
  report.ok = report.missing_goal_literals.empty();
  report.final_state = std::move(state);
  return report;
}

}  // namespace planact::pddl
