#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "planact/flp/backend.hpp"
#include "planact/planner/task.hpp"
#include "planact/world/world.hpp"

namespace planact::harness {

struct Scenario {
  std::string id;
  std::string family;
  std::string domain_path;
  std::string streams_path;
  std::string scene_path;
  std::vector<pddl::Literal> goal;
  std::vector<world::AnomalyEvent> events;
  /// Scripted answers: {"answers": [...], "fallback": "..."}.
  nlohmann::json llm = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::optional<double> l_gt;
  std::size_t max_llm_calls = 5;
};

/// Paths in the file are relative to the file itself.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const nlohmann::json& j, const std::string& base_file);

struct RunOptions {
  /// Empty keeps the domain's default deferral; "none" certifies everything.
  std::optional<std::vector<std::string>> defer;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_llm_calls;
};

struct ScenarioResult {
  std::string id;
  bool success = false;
  /// CombinedActions executed, repairs included.
  std::size_t steps = 0;
  std::size_t llm_calls = 0;
  std::size_t plans = 0;
  std::string failure;
  std::vector<std::string> fired_events;
  std::vector<std::vector<pddl::Literal>> repair_goals;
  std::vector<flp::TranscriptEntry> transcript;
  std::vector<std::string> xml;
  std::vector<std::string> trace;
};

nlohmann::ordered_json result_to_json(const ScenarioResult& r);

/// Scripted backend for the scenario's own answers.
std::unique_ptr<flp::LLMBackend> scripted_backend(const Scenario& sc);

/// Plan, act, and on anomalies run the replanning cycle until the original
/// goal holds in ground truth or the task fails.
ScenarioResult run_scenario(const Scenario& sc, flp::LLMBackend& backend, const RunOptions& options = {});

/// CombinedActions in a plan made with every event applied to the start
/// scene in advance.
std::size_t ground_truth_length(const Scenario& sc);

}  // namespace planact::harness
