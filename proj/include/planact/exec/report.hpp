#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "planact/geom/samplers.hpp"
#include "planact/pddl/types.hpp"

namespace planact::exec {

struct AnomalyReport {
  std::string failed_action;
  std::vector<std::string> args;
  pddl::Literal unsatisfied_constraint;
  /// Sampler kind -> candidate indices examined before exhaustion.
  std::map<std::string, std::size_t> explored;
  /// Observed facts, e.g. "(scanned table1)", sorted.
  std::vector<std::string> observed_facts;
  std::string snapshot_id;
  std::size_t step = 0;

  bool operator==(const AnomalyReport&) const = default;
};

/// Field order: failed_action, args, unsatisfied_constraint, explored,
/// observed_facts, snapshot_id, step.
nlohmann::ordered_json report_to_json(const AnomalyReport& r);
AnomalyReport report_from_json(const nlohmann::json& j);

struct FeedingCursor {
  std::string sampler;
  const geom::SamplerCursor* cursor = nullptr;
};

/// Builds the report for an exhausted constraint. Throws PrematureEmission if
/// any feeding cursor still has values left.
AnomalyReport emit_anomaly(const std::string& failed_action, const std::vector<std::string>& args,
                           const pddl::Literal& constraint, const std::vector<FeedingCursor>& cursors,
                           const pddl::FactSet& observed, const std::string& snapshot_id, std::size_t step);

}  // namespace planact::exec
