#include "planact/exec/report.hpp"

#include "planact/common/error.hpp"
#include "planact/pddl/parser.hpp"

namespace planact::exec {

nlohmann::ordered_json report_to_json(const AnomalyReport& r) {
  nlohmann::ordered_json j;
  j["failed_action"] = r.failed_action;
  j["args"] = r.args;
  j["unsatisfied_constraint"] = pddl::to_string(r.unsatisfied_constraint);
  j["explored"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.explored) j["explored"][k] = v;
  j["observed_facts"] = r.observed_facts;
  j["snapshot_id"] = r.snapshot_id;
  j["step"] = r.step;
  return j;
}

AnomalyReport report_from_json(const nlohmann::json& j) {
  AnomalyReport r;
  try {
    r.failed_action = j.at("failed_action").get<std::string>();
    r.args = j.at("args").get<std::vector<std::string>>();
    const std::vector<pddl::Literal> lits = pddl::parse_conjunction(j.at("unsatisfied_constraint").get<std::string>());
    if (lits.size() != 1) throw SchemaError("unsatisfied_constraint must be one literal");
    r.unsatisfied_constraint = lits.front();
    for (const auto& [k, v] : j.at("explored").items()) r.explored[k] = v.get<std::size_t>();
    r.observed_facts = j.at("observed_facts").get<std::vector<std::string>>();
    r.snapshot_id = j.at("snapshot_id").get<std::string>();
    r.step = j.at("step").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("anomaly report: ") + e.what());
  }
  return r;
}

AnomalyReport emit_anomaly(const std::string& failed_action, const std::vector<std::string>& args,
                           const pddl::Literal& constraint, const std::vector<FeedingCursor>& cursors,
                           const pddl::FactSet& observed, const std::string& snapshot_id, std::size_t step) {
  AnomalyReport r;
  r.failed_action = failed_action;
  r.args = args;
  r.unsatisfied_constraint = constraint;
  for (const FeedingCursor& c : cursors) {
    if (c.cursor == nullptr) continue;
    if (!c.cursor->exhausted()) {
      throw PrematureEmission(c.sampler + " cursor has values left after " + std::to_string(c.cursor->yielded()));
    }
    r.explored[c.sampler] = std::max(r.explored[c.sampler], c.cursor->raw_position());
  }
  for (const pddl::Fact& f : observed) r.observed_facts.push_back(pddl::to_string(f));
  r.snapshot_id = snapshot_id;
  r.step = step;
  return r;
}

}  // namespace planact::exec
