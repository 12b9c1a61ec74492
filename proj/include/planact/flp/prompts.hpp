#pragma once

#include <array>
#include <string>
#include <vector>

#include "planact/exec/report.hpp"
#include "planact/pddl/types.hpp"

namespace planact::flp {

struct PromptBundle {
  std::string first_look_prompt;
  std::string first_look_answer;
  std::string refined_prompt;
  std::string final_answer;
};

/// What the robot believes: objects it can name and logical facts.
struct StateSummary {
  std::vector<pddl::TypedName> objects;
  pddl::FactSet facts;
};

/// Headers of the four refined-prompt sections, in order.
const std::array<std::string, 4>& section_headers();

/// Plain-language anomaly text: the interrupted action, the unsatisfied
/// constraint and (when present) the observed facts.
std::string describe_anomaly(const exec::AnomalyReport& r);

std::string build_first_look_prompt(const exec::AnomalyReport& r);

/// `note` is appended to the output-format section (rejection or retry text).
std::string build_refined_prompt(const exec::AnomalyReport& r, const std::string& flp_answer,
                                 const pddl::Domain& domain, const StateSummary& state,
                                 const std::string& note = "");

}  // namespace planact::flp
