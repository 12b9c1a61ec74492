#include "planact/planner/task.hpp"

#include <algorithm>
#include <tuple>

#include "planact/common/error.hpp"
#include "join.hpp"

namespace planact::planner {

namespace {

using pddl::Atom;
using pddl::Fact;
using pddl::FactSet;

Fact substitute(const Atom& a, const std::map<std::string, std::size_t>& index,
                const std::vector<std::string>& binding) {
  Fact f{a.predicate, {}};
  f.args.reserve(a.args.size());
  for (const std::string& t : a.args) {
    auto it = index.find(t);
    f.args.push_back(it == index.end() ? t : binding[it->second]);
  }
  return f;
}

void ground_schema(detail::Joiner& joiner, const pddl::ActionSchema& schema, std::vector<pddl::GroundAction>& out) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < schema.params.size(); ++i) index[schema.params[i].name] = i;
  joiner.for_each(schema.params, schema.static_pre, [&](const std::vector<std::string>& binding) {
    pddl::GroundAction ga;
    ga.schema = schema.name;
    ga.args = binding;
    for (const Atom& a : schema.pre_plus) ga.pre_plus.insert(substitute(a, index, binding));
    for (const Atom& a : schema.pre_minus) ga.pre_minus.insert(substitute(a, index, binding));
    for (const Atom& a : schema.static_pre) ga.static_pre.insert(substitute(a, index, binding));
    for (const Atom& a : schema.eff_plus) ga.eff_plus.insert(substitute(a, index, binding));
    for (const Atom& a : schema.eff_minus) ga.eff_minus.insert(substitute(a, index, binding));
    out.push_back(std::move(ga));
  });
}

}  // namespace

DeferralPolicy default_deferral(const pddl::Domain& domain, std::size_t max_level) {
  DeferralPolicy policy;
  policy.max_level = max_level;
  if (const pddl::Predicate* kin = domain.find_predicate("kin"); kin && kin->kind == pddl::LiteralKind::Static) {
    policy.deferred.insert("kin");
  }
  for (const pddl::ActionSchema& a : domain.actions) {
    std::set<std::string> targets;
    for (const pddl::TypedName& p : a.params) {
      if (domain.tag_of_type(p.type) != pddl::SemanticTag::Config) continue;
      for (const Atom& e : a.eff_plus) {
        if (std::find(e.args.begin(), e.args.end(), p.name) != e.args.end()) targets.insert(p.name);
      }
    }
    for (const Atom& s : a.static_pre) {
      const pddl::Predicate* pred = domain.find_predicate(s.predicate);
      if (pred == nullptr || pred->kind != pddl::LiteralKind::Static) continue;
      for (const std::string& t : s.args) {
        if (targets.count(t)) policy.deferred.insert(s.predicate);
      }
    }
  }
  return policy;
}

void check_policy(const pddl::Domain& domain, const DeferralPolicy& policy) {
  for (const std::string& name : policy.deferred) {
    const pddl::Predicate* p = domain.find_predicate(name);
    if (p == nullptr || p->kind == pddl::LiteralKind::Fluent) {
      throw UnknownPredicate(name + " is not a static predicate of " + domain.name);
    }
  }
}

FactSet GroundTask::all_static() const {
  FactSet out = statics;
  out.insert(certified.begin(), certified.end());
  out.insert(assumed.begin(), assumed.end());
  return out;
}

GroundTask ground(const pddl::Domain& domain, const pddl::Problem& problem, const FactSet& certified,
                  const FactSet& assumed) {
  GroundTask task;
  task.problem = problem;
  for (const Fact& f : problem.init) (domain.is_fluent(f.predicate) ? task.init : task.statics).insert(f);
  task.certified = certified;
  task.assumed = assumed;

  const FactSet statics = task.all_static();
  detail::Joiner joiner(domain, problem.objects, statics);
  std::vector<pddl::GroundAction> all;
  for (const pddl::ActionSchema& schema : domain.actions) ground_schema(joiner, schema, all);

  // Delete-relaxed reachability from init prunes actions that can never fire.
  FactSet reachable = task.init;
  std::vector<bool> live(all.size(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (live[i]) continue;
      const bool ok = std::all_of(all[i].pre_plus.begin(), all[i].pre_plus.end(),
                                  [&](const Fact& f) { return reachable.count(f) != 0; });
      if (!ok) continue;
      live[i] = true;
      changed = true;
      reachable.insert(all[i].eff_plus.begin(), all[i].eff_plus.end());
    }
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (live[i]) task.actions.push_back(std::move(all[i]));
  }
  std::sort(task.actions.begin(), task.actions.end(), [](const pddl::GroundAction& a, const pddl::GroundAction& b) {
    return std::tie(a.schema, a.args) < std::tie(b.schema, b.args);
  });
  task.actions.erase(std::unique(task.actions.begin(), task.actions.end()), task.actions.end());
  return task;
}

}  // namespace planact::planner
