#include "planact/planner/streams.hpp"

#include <algorithm>

#include "join.hpp"
#include "planact/common/error.hpp"
#include "planact/common/random.hpp"
#include "planact/common/text.hpp"

namespace planact::planner {

namespace {

std::string bare(const std::string& var) { return var.empty() || var[0] != '?' ? var : var.substr(1); }

pddl::Fact substitute(const pddl::Atom& a, const std::map<std::string, std::string>& binding) {
  pddl::Fact f{a.predicate, {}};
  for (const std::string& t : a.args) {
    auto it = binding.find(t);
    f.args.push_back(it == binding.end() ? t : it->second);
  }
  return f;
}

}  // namespace

StreamInstantiator::StreamInstantiator(const pddl::Domain& domain, const pddl::Problem& problem,
                                       const std::vector<pddl::StreamSpec>& streams,
                                       const geom::SamplerRegistry& samplers, const DeferralPolicy& policy,
                                       ValueMap& values, std::uint64_t seed, SamplerStats* stats)
    : domain_(domain),
      problem_(problem),
      streams_(streams),
      samplers_(samplers),
      policy_(policy),
      values_(values),
      seed_(seed),
      stats_(stats) {
  check_policy(domain, policy);
  for (const pddl::Fact& f : problem.init) {
    if (!domain.is_fluent(f.predicate)) known_.insert(f);
  }
  for (const pddl::TypedName& o : problem.objects) {
    if (!values_.count(o.name)) values_[o.name] = Value{o.type, std::nullopt, false};
  }
}

std::vector<std::vector<std::string>> StreamInstantiator::bindings_for(const pddl::StreamSpec& spec) const {
  std::vector<std::vector<std::string>> out;
  detail::Joiner joiner(domain_, problem_.objects, known_);
  joiner.for_each(spec.inputs, spec.domain_literals,
                  [&](const std::vector<std::string>& b) { out.push_back(b); });
  return out;
}

std::string StreamInstantiator::fresh_name(const std::string& var, bool optimistic) {
  const std::string stem = (optimistic ? "opt-" : "") + bare(var);
  for (;;) {
    const std::string name = stem + "-" + std::to_string(name_counters_[stem]++);
    if (!values_.count(name) && !problem_.object_type(name)) return name;
  }
}

bool StreamInstantiator::add_fact(const pddl::Fact& f, bool assumed) {
  if (!known_.insert(f).second) return false;
  (assumed ? outcome_.assumed : outcome_.certified).insert(f);
  return true;
}

std::size_t StreamInstantiator::run_level() {
  // Instances are collected before any is evaluated, so a level only sees
  // facts that existed when it started.
  std::vector<Instance*> pending;
  for (const pddl::StreamSpec& spec : streams_) {
    const bool deferred = std::any_of(spec.certified.begin(), spec.certified.end(),
                                      [&](const pddl::Atom& a) { return policy_.deferred.count(a.predicate) != 0; });
    for (std::vector<std::string>& inputs : bindings_for(spec)) {
      const std::string key = spec.name + "(" + join(inputs, " ") + ")";
      auto [it, inserted] = instances_.try_emplace(key);
      if (inserted) {
        it->second.spec = &spec;
        it->second.inputs = std::move(inputs);
        it->second.deferred = deferred;
      }
      if (!it->second.done) pending.push_back(&it->second);
    }
  }

  std::size_t added = 0;
  std::vector<pddl::TypedName> created;
  for (Instance* inst : pending) {
    const pddl::StreamSpec& spec = *inst->spec;
    std::map<std::string, std::string> binding;
    for (std::size_t i = 0; i < spec.inputs.size(); ++i) binding[spec.inputs[i].name] = inst->inputs[i];

    if (inst->deferred) {
      for (const pddl::TypedName& out : spec.outputs) {
        const std::string name = fresh_name(out.name, true);
        values_[name] = Value{out.type, std::nullopt, true};
        created.push_back({name, out.type});
        binding[out.name] = name;
      }
      for (const pddl::Atom& a : spec.certified) added += add_fact(substitute(a, binding), true) ? 1 : 0;
      inst->done = true;
      continue;
    }

    bool optimistic_input = false;
    geom::SamplerInputs in;
    for (const std::string& name : inst->inputs) {
      auto v = values_.find(name);
      if (v != values_.end() && v->second.optimistic) optimistic_input = true;
      in.push_back({name, v == values_.end() ? std::nullopt : v->second.geom});
    }
    if (optimistic_input) {
      inst->done = true;
      continue;
    }
    if (!inst->cursor) {
      const std::string key = spec.name + "(" + join(inst->inputs, " ") + ")";
      inst->cursor = std::make_unique<geom::SamplerCursor>(samplers_.get(spec.name), std::move(in),
                                                           hash_combine(seed_, fnv1a(key)));
    }
    if (stats_) {
      ++stats_->plan_phase;
      ++stats_->plan_by_stream[spec.name];
    }
    std::optional<geom::SamplerOutputs> outputs = inst->cursor->next();
    if (!outputs) {
      inst->done = true;
      continue;
    }
    for (std::size_t i = 0; i < spec.outputs.size() && i < outputs->size(); ++i) {
      const std::string name = fresh_name(spec.outputs[i].name, false);
      values_[name] = Value{spec.outputs[i].type, (*outputs)[i], false};
      created.push_back({name, spec.outputs[i].type});
      binding[spec.outputs[i].name] = name;
    }
    for (const pddl::Atom& a : spec.certified) added += add_fact(substitute(a, binding), false) ? 1 : 0;
  }

  for (pddl::TypedName& o : created) {
    problem_.objects.push_back(o);
    outcome_.new_objects.push_back(std::move(o));
  }
  ++outcome_.levels;
  return added;
}

bool relaxed_goal_reachable(const pddl::Domain& domain, const pddl::Problem& problem,
                            const pddl::FactSet& certified, const pddl::FactSet& assumed) {
  const GroundTask task = ground(domain, problem, certified, assumed);
  pddl::FactSet reachable = task.init;
  for (const pddl::GroundAction& a : task.actions) reachable.insert(a.eff_plus.begin(), a.eff_plus.end());
  const pddl::FactSet statics = task.all_static();
  for (const pddl::Literal& l : problem.goal) {
    if (!l.positive) continue;
    if (!reachable.count(l.atom) && !statics.count(l.atom)) return false;
  }
  return true;
}

StreamOutcome instantiate_streams(const pddl::Domain& domain, const pddl::Problem& problem,
                                  const std::vector<pddl::StreamSpec>& streams,
                                  const geom::SamplerRegistry& samplers, const DeferralPolicy& policy,
                                  ValueMap& values, std::uint64_t seed, SamplerStats* stats) {
  StreamInstantiator inst(domain, problem, streams, samplers, policy, values, seed, stats);
  for (std::size_t level = 0; level < policy.max_level; ++level) {
    if (inst.run_level() != 0) continue;
    if (!relaxed_goal_reachable(domain, inst.problem(), inst.outcome().certified, inst.outcome().assumed)) {
      throw LevelBudgetExhausted("stream level " + std::to_string(level + 1) + " added no facts");
    }
    break;
  }
  return inst.outcome();
}

}  // namespace planact::planner
