#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "planact/exec/compile.hpp"
#include "planact/exec/report.hpp"
#include "planact/exec/tree.hpp"
#include "planact/planner/planner.hpp"
#include "planact/world/world.hpp"

namespace planact::exec {

struct SlotValue {
  std::string symbol;
  std::optional<geom::GeomValue> geom;
};

struct ExecOptions {
  std::size_t tick_cap = 10'000;
  std::uint64_t seed = 0;
};

struct TreeRun {
  TreeStatus status = TreeStatus::Idle;
  std::optional<AnomalyReport> report;
  std::size_t ticks = 0;
};

struct PlanRun {
  bool success = false;
  /// Combined actions started, the failing one included.
  std::size_t executed = 0;
  std::optional<AnomalyReport> report;
  std::vector<std::string> xml;  // one document per compiled subtree
};

/// Ticks compiled subtrees against one world. Object poses come from a belief
/// that starts as the world's map and is updated only by perception and by
/// the robot's own successful actions.
class Executor {
 public:
  Executor(const pddl::Domain& domain, world::World& world, ExecOptions options = {},
           planner::SamplerStats* stats = nullptr);

  void start(const planner::CombinedAction& action, CSubBT tree, const planner::ValueMap& values);
  /// One tick: runs until an atomic action has executed or the tree ends.
  TreeStatus tick();
  TreeRun run(const planner::CombinedAction& action, CSubBT tree, const planner::ValueMap& values);
  PlanRun execute_plan(const pddl::Plan& plan, const planner::ValueMap& values);

  const CSubBT& tree() const { return tree_; }
  const std::optional<AnomalyReport>& report() const { return report_; }
  /// "<step> <event>" lines, one per atomic action and tree outcome.
  const std::vector<std::string>& trace() const { return trace_; }
  const pddl::FactSet& observed() const { return observed_; }
  const std::set<std::string>& scanned() const { return scanned_; }
  const world::Scene& belief() const { return belief_; }
  /// Resets the belief to the world's current map (used when replanning from
  /// the projected state).
  void sync_belief();
  const std::map<std::string, SlotValue>& blackboard() const { return board_; }

 private:
  enum class Status { Success, Failure, Running };
  struct NodeState {
    std::size_t idx = 0;
    std::unique_ptr<geom::SamplerCursor> cursor;
    std::string signature;
    bool broken = false;
    /// Set on a backtrack target: draw again from the current cursor.
    bool retry = false;
  };

  Status tick_node(std::size_t id);
  Status tick_sampler(std::size_t id);
  Status tick_condition(std::size_t id);
  Status tick_action(std::size_t id);
  void reset_states(std::size_t id);
  bool retryable(std::size_t id) const;

  bool evaluate(const Node& n, std::optional<SlotValue>& out);
  world::Observation look(const std::string& region);
  void absorb(const world::Observation& obs);
  bool post_check(pddl::Literal& failed);
  void fail_with(const pddl::Literal& constraint, const std::vector<FeedingCursor>& cursors);
  pddl::Literal failed_constraint(std::vector<FeedingCursor>& cursors) const;

  const SlotValue& slot(const std::string& name) const;
  pddl::Literal literal_of(const Node& n) const;
  void set_robot_slot();
  std::shared_ptr<const geom::SceneGeometry> belief_geometry();
  geom::SamplerValue sampler_value(const std::string& slot_name) const;
  void log(const std::string& line);

  const pddl::Domain& domain_;
  world::World& world_;
  ExecOptions options_;
  planner::SamplerStats* stats_;

  world::Scene belief_;
  std::shared_ptr<const geom::SceneGeometry> geometry_;
  pddl::FactSet observed_;
  std::set<std::string> scanned_;
  std::vector<std::string> trace_;

  planner::CombinedAction action_;
  CSubBT tree_;
  std::vector<const Node*> nodes_;
  std::vector<std::size_t> parent_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<NodeState> states_;
  std::map<std::string, SlotValue> board_;
  std::optional<AnomalyReport> report_;
  std::optional<std::size_t> last_failure_;
  std::optional<std::size_t> last_exhausted_;
  std::string last_fault_;
  std::size_t ticks_ = 0;
  std::size_t moves_ = 0;
  bool acted_ = false;
};

}  // namespace planact::exec
