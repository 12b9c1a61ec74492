#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "planact/common/error.hpp"
#include "planact/common/random.hpp"
#include "planact/common/text.hpp"
#include "planact/exec/executor.hpp"
#include "planact/exec/report.hpp"
#include "planact/flp/backend.hpp"
#include "planact/harness/bench.hpp"
#include "planact/harness/blocksworld.hpp"
#include "planact/harness/household.hpp"
#include "planact/harness/metrics.hpp"
#include "planact/harness/scenario.hpp"
#include "planact/pddl/parser.hpp"
#include "planact/pddl/semantics.hpp"
#include "planact/planner/planner.hpp"
#include "planact/planner/search.hpp"
#include "planact/world/scene.hpp"

using namespace planact;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct Options {
  std::string domain;
  std::string problem;
  std::string streams;
  std::string scene;
  std::string scenario;
  std::string goal;
  std::string plan;
  std::uint64_t seed = 0;
  std::vector<std::string> defer;
  std::string llm_backend = "scripted";
  std::string llm_endpoint;
  std::string llm_model = "gpt-4o";
  std::string transcript;
  std::size_t max_llm_calls = 5;
  std::size_t repeat = 1;
  std::size_t trials = 5;
  std::vector<std::size_t> blocks;
  std::string out;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_file(o.out, text);
  }
}

std::string sibling(const std::string& out, const std::string& suffix) {
  return out.empty() ? std::string() : out + suffix;
}

planner::DeferralPolicy policy_from(const pddl::Domain& domain, const Options& o) {
  planner::DeferralPolicy policy = planner::default_deferral(domain);
  if (!o.defer.empty()) {
    policy.deferred.clear();
    for (const std::string& p : o.defer) {
      if (p != "none") policy.deferred.insert(to_lower(p));
    }
    planner::check_policy(domain, policy);
  }
  return policy;
}

struct Setup {
  pddl::Domain domain;
  std::vector<pddl::StreamSpec> streams;
  std::optional<world::Scene> scene;
  pddl::Problem problem;
  planner::ValueMap values;
};

/// Either a plain PDDL problem or a scene projection with a goal taken from
/// --goal or the problem file.
Setup load_setup(const Options& o) {
  Setup s;
  s.domain = pddl::parse_domain(read_file(o.domain));
  if (!o.streams.empty()) s.streams = pddl::parse_streams(read_file(o.streams), s.domain);
  std::vector<pddl::Literal> goal;
  if (!o.problem.empty()) {
    s.problem = pddl::parse_problem(read_file(o.problem), s.domain);
    goal = s.problem.goal;
  }
  if (!o.goal.empty()) goal = pddl::parse_conjunction(o.goal);
  if (!o.scene.empty()) {
    s.scene = world::load_scene(o.scene);
    harness::HouseholdTask t = harness::household_task(s.domain, *s.scene, goal, s.problem.name.empty() ? "task" : s.problem.name);
    s.problem = std::move(t.problem);
    s.values = std::move(t.values);
  } else if (o.problem.empty()) {
    throw SchemaError("need --problem, or --scene with --goal");
  }
  return s;
}

planner::PlanResult make_plan(const Setup& s, const Options& o, planner::SamplerStats* stats) {
  if (s.streams.empty()) {
    planner::PlanResult r;
    r.task = planner::ground(s.domain, s.problem, {}, {});
    r.plan = planner::plan(r.task, &r.search);
    r.values = s.values;
    return r;
  }
  if (!s.scene) throw SchemaError("stream planning needs --scene for geometry");
  const geom::SamplerRegistry samplers =
      geom::make_registry(std::make_shared<const geom::SceneGeometry>(s.scene->geometry()));
  return planner::plan_with_streams(s.domain, s.problem, s.streams, samplers, policy_from(s.domain, o), s.values,
                                    o.seed, stats);
}

int cmd_plan(const Options& o) {
  const Setup s = load_setup(o);
  planner::SamplerStats stats;
  const planner::PlanResult r = make_plan(s, o, &stats);
  ordered_json j = planner::plan_to_json(r.plan, r.values, &r.task);
  j["stats"] = {{"plan_phase_calls", stats.plan_phase}, {"expanded", r.search.expanded}, {"levels", r.streams.levels}};
  emit(o, j.dump(2) + "\n");
  return 0;
}

int cmd_execute(const Options& o) {
  const Setup s = load_setup(o);
  if (!s.scene) throw SchemaError("execute needs --scene");
  planner::SamplerStats stats;
  pddl::Plan plan;
  planner::ValueMap values = s.values;
  if (!o.plan.empty()) {
    plan = planner::plan_from_json(json::parse(read_file(o.plan)), s.domain, &values);
  } else {
    const planner::PlanResult r = make_plan(s, o, &stats);
    plan = r.plan;
    values = r.values;
  }
  world::World world(*s.scene, {}, o.seed);
  exec::ExecOptions eo;
  eo.seed = o.seed;
  exec::Executor ex(s.domain, world, eo, &stats);
  const exec::PlanRun run = ex.execute_plan(plan, values);
  const bool goal_holds = pddl::satisfies(world::ground_truth_state(world.scene()), s.problem.goal);

  ordered_json j;
  j["success"] = run.success && goal_holds;
  j["executed"] = run.executed;
  j["report"] = run.report ? exec::report_to_json(*run.report) : ordered_json();
  j["exec_phase_calls"] = stats.exec_phase;
  j["trace"] = ex.trace();
  emit(o, j.dump(2) + "\n");
  if (!o.out.empty()) write_file(sibling(o.out, ".trees.xml"), join(run.xml, ""));
  return j["success"].get<bool>() ? 0 : 1;
}

std::unique_ptr<flp::LLMBackend> make_backend(const Options& o, const harness::Scenario& sc) {
  if (o.llm_backend == "scripted") return harness::scripted_backend(sc);
  if (o.llm_backend == "replay") {
    if (o.transcript.empty()) throw SchemaError("replay backend needs --transcript");
    return std::make_unique<flp::ReplayBackend>(flp::transcript_from_text(read_file(o.transcript)));
  }
  if (o.llm_backend == "http") {
    flp::HttpConfig cfg;
    cfg.endpoint = o.llm_endpoint;
    cfg.model = o.llm_model;
    return std::make_unique<flp::HttpBackend>(cfg);
  }
  throw SchemaError("unknown backend " + o.llm_backend);
}

harness::RunOptions run_options(const Options& o, std::uint64_t seed) {
  harness::RunOptions ro;
  if (!o.defer.empty()) ro.defer = o.defer;
  ro.seed = seed;
  ro.max_llm_calls = o.max_llm_calls;
  return ro;
}

int run_one(const Options& o) {
  const harness::Scenario sc = harness::load_scenario(o.scenario);
  const std::unique_ptr<flp::LLMBackend> backend = make_backend(o, sc);
  const harness::ScenarioResult r = harness::run_scenario(sc, *backend, run_options(o, o.seed ? o.seed : sc.seed));
  emit(o, harness::result_to_json(r).dump(2) + "\n");
  if (!o.out.empty()) {
    write_file(sibling(o.out, ".transcript.jsonl"), flp::transcript_to_text(r.transcript));
    write_file(sibling(o.out, ".trees.xml"), join(r.xml, ""));
  }
  return r.success ? 0 : 1;
}

std::string aspl_or_dash(const std::vector<harness::TaskMetrics>& records) {
  try {
    return format_fixed(harness::compute_aspl(records), 3);
  } catch (const MissingGroundTruth&) {
    return "-";
  }
}

/// Every scenario in a directory, `repeat` seeds each; metrics CSV out.
int run_suite(const Options& o) {
  std::vector<std::string> files;
  for (const auto& e : std::filesystem::directory_iterator(o.scenario)) {
    if (e.path().extension() == ".json") files.push_back(e.path().string());
  }
  std::sort(files.begin(), files.end());
  std::map<std::string, std::vector<harness::TaskMetrics>> families;
  std::string csv = "task,family,attempts,sr,mean_length,l_gt\n";
  for (const std::string& f : files) {
    const harness::Scenario sc = harness::load_scenario(f);
    std::vector<bool> success;
    std::vector<std::size_t> lengths;
    for (std::size_t k = 0; k < o.repeat; ++k) {
      const std::unique_ptr<flp::LLMBackend> backend = make_backend(o, sc);
      const std::uint64_t seed = k == 0 ? sc.seed : hash_combine(sc.seed, k);
      const harness::ScenarioResult r = harness::run_scenario(sc, *backend, run_options(o, seed));
      success.push_back(r.success);
      lengths.push_back(r.steps);
    }
    std::optional<double> l_gt = sc.l_gt;
    if (!l_gt) {
      try {
        l_gt = static_cast<double>(harness::ground_truth_length(sc));
      } catch (const Error& e) {
        std::cerr << sc.id << ": no ground-truth length (" << e.what() << ")\n";
      }
    }
    const harness::TaskMetrics m = harness::summarize(sc.id, success, lengths, l_gt);
    families[sc.family].push_back(m);
    csv += sc.id + "," + sc.family + "," + std::to_string(o.repeat) + "," + format_fixed(m.sr, 3) + "," +
           format_fixed(m.mean_length, 3) + "," + (l_gt ? format_fixed(*l_gt, 1) : std::string("-")) + "\n";
  }
  csv += "\nfamily,n,expected_n,sr,aspl\n";
  for (const auto& [family, records] : families) {
    double sr = 0.0;
    for (const harness::TaskMetrics& m : records) sr += m.sr;
    const auto expected = harness::family_sizes().find(family);
    csv += family + "," + std::to_string(records.size()) + "," +
           (expected == harness::family_sizes().end() ? std::string("-") : std::to_string(expected->second)) + "," +
           format_fixed(sr / static_cast<double>(records.size()), 3) + "," +
           aspl_or_dash(records) + "\n";
  }
  emit(o, csv);
  return 0;
}

int cmd_run(const Options& o) {
  if (o.scenario.empty()) throw SchemaError("run needs --scenario");
  return std::filesystem::is_directory(o.scenario) ? run_suite(o) : run_one(o);
}

int cmd_bench(const Options& o) {
  if (!o.blocks.empty()) {
    const pddl::Domain domain =
        pddl::parse_domain(read_file(o.domain.empty() ? data_path("domains/blocksworld.pddl") : o.domain));
    std::string csv = "blocks,seed,l_gt,plan_length,expanded\n";
    for (std::size_t n : o.blocks) {
      for (std::size_t t = 0; t < o.trials; ++t) {
        const harness::BlocksInstance inst = harness::gen_blocksworld(domain, n, hash_combine(o.seed, t));
        planner::SearchStats st;
        const pddl::Plan plan = planner::plan(planner::ground(domain, inst.problem, {}, {}), &st);
        csv += std::to_string(n) + "," + std::to_string(t) + "," + std::to_string(inst.l_gt) + "," +
               std::to_string(plan.steps.size()) + "," + std::to_string(st.expanded) + "\n";
      }
    }
    emit(o, csv);
    return 0;
  }
  const pddl::Domain domain =
      pddl::parse_domain(read_file(o.domain.empty() ? data_path("domains/household.pddl") : o.domain));
  const std::vector<pddl::StreamSpec> streams = pddl::parse_streams(
      read_file(o.streams.empty() ? data_path("domains/household_streams.pddl") : o.streams), domain);
  emit(o, harness::bench_to_csv(harness::bench_deferral(domain, streams, harness::default_bench_problems(), o.trials,
                                                        o.seed)));
  return 0;
}

int cmd_validate(const Options& o) {
  if (!o.scenario.empty()) {
    const harness::Scenario sc = harness::load_scenario(o.scenario);
    for (const std::string& f : {sc.domain_path, sc.streams_path, sc.scene_path}) {
      if (!std::filesystem::exists(f)) throw SchemaError("missing file " + f);
    }
    const pddl::Domain domain = pddl::parse_domain(read_file(sc.domain_path));
    pddl::parse_streams(read_file(sc.streams_path), domain);
    harness::household_task(domain, world::load_scene(sc.scene_path), sc.goal, sc.id);
    std::cout << sc.id << ": ok\n";
    return 0;
  }
  if (o.plan.empty()) throw SchemaError("validate needs --plan or --scenario");
  Setup s = load_setup(o);
  const json plan_json = json::parse(read_file(o.plan));
  const pddl::Plan plan = planner::plan_from_json(plan_json, s.domain);
  const planner::PlanSupport support = planner::plan_support_from_json(plan_json);
  for (const pddl::TypedName& obj : support.objects) {
    if (!s.problem.object_type(obj.name)) s.problem.objects.push_back(obj);
  }
  pddl::FactSet assumed = support.certified;
  assumed.insert(support.assumed.begin(), support.assumed.end());
  const pddl::ValidationReport v = pddl::validate_plan(s.domain, s.problem, plan, assumed);
  ordered_json j;
  j["valid"] = v.ok;
  j["failing_step"] = v.failing_step;
  j["missing_goal_literals"] = ordered_json::array();
  for (const pddl::Literal& l : v.missing_goal_literals) j["missing_goal_literals"].push_back(pddl::to_string(l));
  emit(o, j.dump(2) + "\n");
  return v.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Task and motion planning with behavior-tree execution and model-guided replanning"};
  app.require_subcommand(1);
  Options o;

  const auto common = [&](CLI::App* c) {
    c->add_option("--domain", o.domain, "PDDL domain file");
    c->add_option("--problem", o.problem, "PDDL problem file");
    c->add_option("--streams", o.streams, "stream declarations");
    c->add_option("--scene", o.scene, "scene JSON");
    c->add_option("--goal", o.goal, "goal conjunction for a scene task");
    c->add_option("--seed", o.seed, "random seed");
    c->add_option("--defer", o.defer, "deferred static predicates, or none")->delimiter(',');
    c->add_option("--out", o.out, "output path");
  };
  CLI::App* plan = app.add_subcommand("plan", "plan and print the plan as JSON");
  common(plan);
  CLI::App* execute = app.add_subcommand("execute", "plan (or load --plan) and execute without replanning");
  common(execute);
  execute->add_option("--plan", o.plan, "plan JSON");
  CLI::App* run = app.add_subcommand("run", "run a scenario file or a directory of scenarios");
  common(run);
  run->add_option("--scenario", o.scenario, "scenario JSON or directory")->required();
  run->add_option("--llm-backend", o.llm_backend, "scripted, replay or http")
      ->check(CLI::IsMember({"scripted", "replay", "http"}));
  run->add_option("--llm-endpoint", o.llm_endpoint, "chat-completion URL (http backend)");
  run->add_option("--llm-model", o.llm_model, "model name (http backend)");
  run->add_option("--transcript", o.transcript, "transcript to replay");
  run->add_option("--max-llm-calls", o.max_llm_calls, "language model call budget per task");
  run->add_option("--repeat", o.repeat, "seeds per scenario in directory mode");
  CLI::App* bench = app.add_subcommand("bench", "deferral benchmark CSV, or blocks world with --blocks");
  common(bench);
  bench->add_option("--trials", o.trials, "trials per problem");
  bench->add_option("--blocks", o.blocks, "blocks world sizes")->delimiter(',');
  CLI::App* validate = app.add_subcommand("validate", "check a plan JSON or a scenario file");
  common(validate);
  validate->add_option("--plan", o.plan, "plan JSON");
  validate->add_option("--scenario", o.scenario, "scenario JSON");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*plan) return cmd_plan(o);
    if (*execute) return cmd_execute(o);
    if (*run) return cmd_run(o);
    if (*bench) return cmd_bench(o);
    if (*validate) return cmd_validate(o);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
