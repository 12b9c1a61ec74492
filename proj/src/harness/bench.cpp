#include "planact/harness/bench.hpp"

#include <chrono>
#include <memory>

#include "planact/common/error.hpp"
#include "planact/common/random.hpp"
#include "planact/common/text.hpp"
#include "planact/harness/household.hpp"
#include "planact/pddl/parser.hpp"
#include "planact/planner/planner.hpp"
#include "planact/world/scene.hpp"

namespace planact::harness {

std::vector<BenchProblem> default_bench_problems() {
  const std::string kitchen = data_path("scenes/kitchen.json");
  const std::string tables = data_path("scenes/two_tables_four_drawers.json");
  const auto goal = [](const std::string& text) { return pddl::parse_conjunction(text); };
  return {
      {"kitchen-1", kitchen, goal("(and (on cube1 tray))"), 1},
      {"kitchen-2", kitchen, goal("(and (on cube1 tray) (on green_cube tray))"), 2},
      {"kitchen-3", kitchen, goal("(and (on cube1 tray) (on green_cube tray) (on black_cube table1))"), 3},
      {"tables-1", tables, goal("(and (on cube1 table2))"), 1},
      {"tables-2", tables, goal("(and (on cube1 table2) (on cube2 table1))"), 2},
  };
}

std::vector<BenchRow> bench_deferral(const pddl::Domain& domain, const std::vector<pddl::StreamSpec>& streams,
                                     const std::vector<BenchProblem>& problems, std::size_t trials,
                                     std::uint64_t seed) {
  std::vector<BenchRow> rows;
  for (const BenchProblem& bp : problems) {
    const world::Scene scene = world::load_scene(bp.scene_path);
    const HouseholdTask task = household_task(domain, scene, bp.goal, bp.name);
    const geom::SamplerRegistry samplers =
        geom::make_registry(std::make_shared<const geom::SceneGeometry>(scene.geometry()));
    for (std::size_t trial = 0; trial < trials; ++trial) {
      for (const bool deferred : {true, false}) {
        planner::DeferralPolicy policy = planner::default_deferral(domain);
        if (!deferred) policy.deferred.clear();
        BenchRow row{bp.name, bp.size, trial, deferred ? "deferred" : "full"};
        planner::SamplerStats stats;
        const auto t0 = std::chrono::steady_clock::now();
        try {
          const planner::PlanResult r = planner::plan_with_streams(domain, task.problem, streams, samplers, policy,
                                                                   task.values, hash_combine(seed, trial), &stats);
          row.solved = true;
          row.plan_length = r.plan.steps.size();
        } catch (const NoPlan&) {
        } catch (const LevelBudgetExhausted&) {
        }
        row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        row.plan_calls = stats.plan_phase;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string bench_to_csv(const std::vector<BenchRow>& rows) {
  std::string out = "problem,size,trial,mode,plan_calls,wall_ms,plan_length,solved\n";
  for (const BenchRow& r : rows) {
    out += r.problem + "," + std::to_string(r.size) + "," + std::to_string(r.trial) + "," + r.mode + "," +
           std::to_string(r.plan_calls) + "," + format_fixed(r.wall_ms, 3) + "," + std::to_string(r.plan_length) +
           "," + (r.solved ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace planact::harness
