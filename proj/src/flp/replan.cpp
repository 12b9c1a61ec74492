#include "planact/flp/replan.hpp"

#include <algorithm>
#include <optional>

#include "planact/common/error.hpp"
#include "planact/pddl/printer.hpp"
#include "planact/world/world.hpp"

namespace planact::flp {

namespace {

class Session {
 public:
  Session(Engine& engine, LLMBackend& backend, ReplanState& state, const ReplanOptions& options)
      : engine_(engine), backend_(backend), state_(state), options_(options) {}

  /// One two-step exchange. Returns nothing when extraction failed twice.
  std::optional<GoalSet> ask(const exec::AnomalyReport& report) {
    PromptBundle bundle;
    bundle.first_look_prompt = build_first_look_prompt(report);
    bundle.first_look_answer = call(bundle.first_look_prompt);

    const StateSummary summary = engine_.belief_summary();
    const pddl::Problem problem = engine_.current_problem();
    std::string note;
    bool retried = false;
    for (;;) {
      bundle.refined_prompt = build_refined_prompt(report, bundle.first_look_answer, engine_.domain(), summary, note);
      bundle.final_answer = call(bundle.refined_prompt);
      state_.bundles.push_back(bundle);
      GoalSet goals;
      try {
        goals = extract_goals(bundle.final_answer, engine_.domain(), problem);
      } catch (const Error& e) {
        if (retried) return std::nullopt;
        retried = true;
        note = std::string("Your previous reply could not be used (") + e.what() +
               "). Reply again with exactly one fenced (:goal (and ...)) block.";
        continue;
      }
      goals.attempt = state_.history.size();
      if (std::find(state_.history.begin(), state_.history.end(), goals) != state_.history.end()) {
        note = "The goal " + pddl::print_conjunction(goals.literals) +
               " was already tried and did not resolve the problem. Propose a different goal.";
        continue;
      }
      state_.history.push_back(goals);
      return goals;
    }
  }

 private:
  std::string call(const std::string& prompt) {
    if (state_.llm_calls_used >= options_.max_llm_calls) {
      throw TaskFailed("language model call budget of " + std::to_string(options_.max_llm_calls) + " reached");
    }
    ++state_.llm_calls_used;
    return backend_.complete(prompt);
  }

  Engine& engine_;
  LLMBackend& backend_;
  ReplanState& state_;
  const ReplanOptions& options_;
};

void remember_persistent(const Engine& engine, ReplanState& state) {
  for (const pddl::Fact& f : world::ground_truth_state(engine.world_scene())) {
    if (f.predicate == "scanned") state.persistent.insert(f);
  }
}

}  // namespace

RepairOutcome replan_cycle(Engine& engine, const exec::AnomalyReport& report, LLMBackend& backend, ReplanState& state,
                           const ReplanOptions& options) {
  Session session(engine, backend, state, options);
  RepairOutcome out;
  const std::size_t calls_before = state.llm_calls_used;
  exec::AnomalyReport current = report;
  for (;;) {
    state.suspended_at = engine.path_length();
    remember_persistent(engine, state);
    const std::optional<GoalSet> goals = session.ask(current);
    out.llm_calls = state.llm_calls_used - calls_before;
    if (!goals) continue;

    Engine::Attempt repair = engine.pursue(goals->literals, pddl::PlanProvenance::Repair, state.persistent);
    if (!repair.planned) {
      throw TaskFailed("repair goal " + pddl::print_conjunction(goals->literals) + " is unsolvable: " + repair.error);
    }
    if (!repair.run.success) {
      current = *repair.run.report;
      continue;
    }
    out.repair_plan = repair.plan;

    remember_persistent(engine, state);
    Engine::Attempt resume = engine.pursue(state.original_goal, pddl::PlanProvenance::Initial, state.persistent);
    if (!resume.planned) throw TaskFailed("original goal unreachable after repair: " + resume.error);
    if (resume.run.success) {
      out.resumed = true;
      return out;
    }
    current = *resume.run.report;
  }
}

}  // namespace planact::flp
