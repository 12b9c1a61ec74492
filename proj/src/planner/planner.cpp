#include "planact/planner/planner.hpp"

#include "planact/common/error.hpp"
#include "planact/geom/codec.hpp"
#include "planact/pddl/parser.hpp"
#include "planact/pddl/semantics.hpp"

namespace planact::planner {

PlanResult plan_with_streams(const pddl::Domain& domain, const pddl::Problem& problem,
                             const std::vector<pddl::StreamSpec>& streams, const geom::SamplerRegistry& samplers,
                             const DeferralPolicy& policy, ValueMap values, std::uint64_t seed,
                             SamplerStats* stats) {
  PlanResult result;
  StreamInstantiator inst(domain, problem, streams, samplers, policy, values, seed, stats);
  for (std::size_t level = 0;; ++level) {
    GroundTask task = ground(domain, inst.problem(), inst.outcome().certified, inst.outcome().assumed);
    SearchStats search_stats;
    if (std::optional<pddl::Plan> p = search(task, &search_stats)) {
      result.plan = *std::move(p);
      result.task = std::move(task);
      result.streams = inst.outcome();
      result.search = search_stats;
      result.values = std::move(values);
      return result;
    }
    if (level == policy.max_level || streams.empty()) break;
    if (inst.run_level() == 0) {
      if (!relaxed_goal_reachable(domain, inst.problem(), inst.outcome().certified, inst.outcome().assumed)) {
        throw LevelBudgetExhausted("stream level " + std::to_string(level + 1) + " added no facts");
      }
      break;
    }
  }
  throw NoPlan("no plan for " + problem.name + " within " + std::to_string(policy.max_level) + " stream levels");
}

std::string CombinedAction::to_string() const {
  std::string out;
  for (const pddl::GroundAction& a : constituents) out += (out.empty() ? "" : " ") + a.to_string();
  return name + "[" + out + "]";
}

std::vector<CombinedAction> combine_actions(const pddl::Plan& plan) {
  std::vector<CombinedAction> out;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const pddl::GroundAction& a = plan.steps[i];
    if (a.schema == "move" && i + 1 < plan.steps.size()) {
      const std::string& next = plan.steps[i + 1].schema;
      if (next == "pick" || next == "place") {
        const std::string name = "move-and-" + next;
        out.push_back({name, {a, plan.steps[i + 1]}, name});
        ++i;
        continue;
      }
    }
    out.push_back({a.schema, {a}, a.schema});
  }
  return out;
}

pddl::FactSet apply_combined(const CombinedAction& action, const pddl::FactSet& state) {
  pddl::FactSet s = state;
  for (const pddl::GroundAction& a : action.constituents) s = pddl::apply(a, s);
  return s;
}

nlohmann::ordered_json plan_to_json(const pddl::Plan& plan, const ValueMap& values, const GroundTask* task) {
  nlohmann::ordered_json j;
  j["provenance"] = plan.provenance == pddl::PlanProvenance::Initial ? "initial" : "repair";
  j["steps"] = nlohmann::ordered_json::array();
  nlohmann::ordered_json vals = nlohmann::ordered_json::object();
  std::set<std::string> mentioned;
  for (const pddl::GroundAction& a : plan.steps) {
    j["steps"].push_back({{"action", a.schema}, {"args", a.args}});
    mentioned.insert(a.args.begin(), a.args.end());
  }
  for (const std::string& s : mentioned) {
    auto it = values.find(s);
    if (it == values.end()) continue;
    if (it->second.optimistic) {
      vals[s] = "optimistic";
    } else if (it->second.geom && !std::holds_alternative<geom::ObjectShape>(*it->second.geom) &&
               !std::holds_alternative<geom::Rect>(*it->second.geom)) {
      vals[s] = geom::to_json(*it->second.geom);
    }
  }
  j["values"] = std::move(vals);
  if (task != nullptr) {
    nlohmann::ordered_json objects = nlohmann::ordered_json::array();
    for (const pddl::TypedName& o : task->problem.objects) {
      if (mentioned.count(o.name)) objects.push_back({{"name", o.name}, {"type", o.type}});
    }
    nlohmann::ordered_json certified = nlohmann::ordered_json::array();
    nlohmann::ordered_json assumed = nlohmann::ordered_json::array();
    std::set<pddl::Fact> used;
    for (const pddl::GroundAction& a : plan.steps) used.insert(a.static_pre.begin(), a.static_pre.end());
    for (const pddl::Fact& f : used) {
      if (task->certified.count(f)) certified.push_back(pddl::to_string(f));
      if (task->assumed.count(f)) assumed.push_back(pddl::to_string(f));
    }
    j["objects"] = std::move(objects);
    j["certified"] = std::move(certified);
    j["assumed"] = std::move(assumed);
  }
  return j;
}

PlanSupport plan_support_from_json(const nlohmann::json& j) {
  PlanSupport s;
  try {
    for (const nlohmann::json& o : j.value("objects", nlohmann::json::array())) {
      s.objects.push_back({o.at("name").get<std::string>(), o.at("type").get<std::string>()});
    }
    const auto facts = [&](const char* key, pddl::FactSet& out) {
      for (const nlohmann::json& f : j.value(key, nlohmann::json::array())) {
        for (const pddl::Literal& l : pddl::parse_conjunction(f.get<std::string>())) out.insert(l.atom);
      }
    };
    facts("certified", s.certified);
    facts("assumed", s.assumed);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("plan support: ") + e.what());
  }
  return s;
}

pddl::Plan plan_from_json(const nlohmann::json& j, const pddl::Domain& domain, ValueMap* values) {
  if (!j.is_object() || !j.contains("steps") || !j["steps"].is_array()) throw SchemaError("plan needs a steps array");
  pddl::Plan plan;
  plan.provenance = j.value("provenance", "initial") == "repair" ? pddl::PlanProvenance::Repair
                                                                 : pddl::PlanProvenance::Initial;
  for (const nlohmann::json& step : j["steps"]) {
    plan.steps.push_back(pddl::ground_action(domain, step.at("action").get<std::string>(),
                                             step.at("args").get<std::vector<std::string>>()));
  }
  if (values && j.contains("values")) {
    for (const auto& [name, v] : j["values"].items()) {
      if (v.is_string() && v.get<std::string>() == "optimistic") {
        (*values)[name].optimistic = true;
      } else {
        const geom::GeomValue g = geom::geom_from_json(v);
        (*values)[name] = Value{geom::kind_name(g), g, false};
      }
    }
  }
  return plan;
}

}  // namespace planact::planner
