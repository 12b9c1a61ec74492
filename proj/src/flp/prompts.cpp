#include "planact/flp/prompts.hpp"

#include <algorithm>
#include <map>

#include "planact/common/text.hpp"

namespace planact::flp {

namespace {

std::string fill(std::string text, const std::string& key, const std::string& value) {
  const std::string token = "{{" + key + "}}";
  for (std::size_t at = text.find(token); at != std::string::npos; at = text.find(token, at + value.size())) {
    text.replace(at, token.size(), value);
  }
  return text;
}

const std::string& template_text(const std::string& name) {
  static std::map<std::string, std::string> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, read_file(data_path("prompts/" + name))).first;
  return it->second;
}

bool has_fact(const std::vector<std::string>& facts, const std::string& fact) {
  return std::find(facts.begin(), facts.end(), fact) != facts.end();
}

std::string constraint_sentence(const exec::AnomalyReport& r) {
  const pddl::Atom& a = r.unsatisfied_constraint.atom;
  const auto arg = [&](std::size_t i) { return i < a.args.size() ? a.args[i] : std::string("?"); };
  if (!r.unsatisfied_constraint.positive) {
    if (a.predicate == "closed") return arg(0) + " is closed, but the action needs it open.";
    return arg(0) + " is " + a.predicate + ", but the action requires that it is not.";
  }
  if (a.predicate == "on") {
    const bool scanned = has_fact(r.observed_facts, "(scanned " + arg(1) + ")");
    return arg(0) + " was not detected on " + arg(1) + (scanned ? " after scanning." : ".");
  }
  if (a.predicate == "supported") return "No free stable placement for " + arg(0) + " was found on " + arg(2) + ".";
  if (a.predicate == "kin") return arg(1) + " could not be reached with any arm motion.";
  if (a.predicate == "basemotion") return "No collision-free base path to the target was found.";
  if (a.predicate == "viewconf") return "No reachable viewpoint for " + arg(0) + " was found.";
  if (a.predicate == "holding") return arg(1) + " was not in the gripper after " + r.failed_action + ".";
  if (a.predicate == "scanned") return arg(0) + " could not be scanned.";
  return "The condition " + pddl::to_string(r.unsatisfied_constraint) + " could not be satisfied.";
}

std::string predicate_signature(const pddl::Predicate& p) {
  std::string s = "(" + p.name;
  for (const pddl::TypedName& t : p.params) s += " " + t.name + " - " + t.type;
  return s + ")";
}

}  // namespace

const std::array<std::string, 4>& section_headers() {
  static const std::array<std::string, 4> headers = {
      "=== 1. ACTION LIBRARY ===", "=== 2. ENVIRONMENT STATUS AND ANOMALY ===", "=== 3. FIRST LOOK PLAN ===",
      "=== 4. OUTPUT FORMAT ==="};
  return headers;
}

std::string describe_anomaly(const exec::AnomalyReport& r) {
  std::string out = "The robot was executing " + r.failed_action;
  if (!r.args.empty()) out += " (" + join(r.args, " ") + ")";
  out += ".\n" + constraint_sentence(r) + "\n";
  if (!r.observed_facts.empty()) out += "Observed: " + join(r.observed_facts, ", ") + "\n";
  return out;
}

std::string build_first_look_prompt(const exec::AnomalyReport& r) {
  return fill(template_text("first_look.v1.txt"), "anomaly", describe_anomaly(r));
}

std::string build_refined_prompt(const exec::AnomalyReport& r, const std::string& flp_answer,
                                 const pddl::Domain& domain, const StateSummary& state, const std::string& note) {
  std::string actions;
  for (const pddl::ActionSchema& a : domain.actions) {
    actions += "- " + a.name + ": " + (a.description.empty() ? a.name : a.description);
    std::vector<std::string> success;
    for (const pddl::Atom& e : a.eff_plus) {
      if (domain.is_logical(e.predicate)) success.push_back(pddl::to_string(e));
    }
    actions += " Success: " + (success.empty() ? std::string("no logical change") : join(success, ", ")) + "\n";
  }

  std::string env = "Objects:";
  for (const pddl::TypedName& o : state.objects) env += " " + o.name + " - " + o.type + ";";
  env += "\nKnown state:";
  for (const pddl::Fact& f : state.facts) env += " " + pddl::to_string(f);
  env += "\nAnomaly:\n" + describe_anomaly(r);

  std::string vocabulary;
  for (const std::string& name : domain.logical_predicates) {
    if (const pddl::Predicate* p = domain.find_predicate(name)) vocabulary += predicate_signature(*p) + "\n";
  }

  std::string text = template_text("refined.v1.txt");
  text = fill(text, "actions", actions);
  text = fill(text, "environment", env);
  text = fill(text, "vocabulary", vocabulary);
  text = fill(text, "note", note);
  // Last, so template tokens inside the model's answer stay literal.
  return fill(text, "first_look", flp_answer);
}

}  // namespace planact::flp
