#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "planact/exec/report.hpp"
#include "planact/flp/backend.hpp"
#include "planact/flp/engine.hpp"
#include "planact/flp/goals.hpp"

namespace planact::flp {

struct ReplanOptions {
  std::size_t max_llm_calls = 5;
};

struct ReplanState {
  std::vector<pddl::Literal> original_goal;
  /// Number of CombinedActions run when execution was suspended.
  std::size_t suspended_at = 0;
  std::size_t llm_calls_used = 0;
  std::vector<GoalSet> history;
  /// Facts carried into every repair init (scanned regions, object flags).
  pddl::FactSet persistent;
  std::vector<PromptBundle> bundles;
};

struct RepairOutcome {
  bool resumed = false;
  pddl::Plan repair_plan;
  std::size_t llm_calls = 0;
};

/// Two-step prompting, goal validation, repair and a fresh plan to the
/// original goal, repeated on further anomalies. Throws TaskFailed when the
/// call budget runs out, a repair goal has no plan, or the original goal
/// cannot be planned after a repair.
RepairOutcome replan_cycle(Engine& engine, const exec::AnomalyReport& report, LLMBackend& backend,
                           ReplanState& state, const ReplanOptions& options = {});

}  // namespace planact::flp
