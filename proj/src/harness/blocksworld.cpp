#include "planact/harness/blocksworld.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "planact/common/error.hpp"
#include "planact/common/random.hpp"
#include "planact/pddl/semantics.hpp"
#include "planact/planner/search.hpp"
#include "planact/planner/task.hpp"

namespace planact::harness {

namespace {

using Towers = std::vector<std::vector<std::string>>;  // bottom first

Towers random_towers(const std::vector<std::string>& blocks, Rng& rng) {
  std::vector<std::string> order = blocks;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  Towers towers;
  for (const std::string& b : order) {
    if (towers.empty() || rng.below(2) == 0) towers.emplace_back();
    towers.back().push_back(b);
  }
  return towers;
}

std::vector<pddl::Literal> support_literals(const Towers& towers) {
  std::vector<pddl::Literal> out;
  for (const auto& t : towers) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      out.push_back(i == 0 ? pddl::Literal{{"ontable", {t[i]}}, true} : pddl::Literal{{"on", {t[i], t[i - 1]}}, true});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

pddl::FactSet tower_state(const Towers& towers) {
  pddl::FactSet s{{"handempty", {}}};
  for (const pddl::Literal& l : support_literals(towers)) s.insert(l.atom);
  for (const auto& t : towers) s.insert({"clear", {t.back()}});
  return s;
}

/// Every ground action over the problem's objects, by exhaustive binding.
std::vector<pddl::GroundAction> all_ground_actions(const pddl::Domain& domain, const pddl::Problem& problem) {
  std::vector<pddl::GroundAction> out;
  for (const pddl::ActionSchema& a : domain.actions) {
    std::vector<std::string> args(a.params.size());
    const auto bind = [&](auto&& self, std::size_t i) -> void {
      if (i == a.params.size()) {
        out.push_back(pddl::ground_action(domain, a, args, &problem));
        return;
      }
      for (const pddl::TypedName& o : problem.objects) {
        if (!domain.is_subtype(o.type, a.params[i].type)) continue;
        args[i] = o.name;
        self(self, i + 1);
      }
    };
    bind(bind, 0);
  }
  return out;
}

template <typename Visit>
void bfs(const pddl::Domain& domain, const pddl::Problem& problem, std::size_t limit, Visit visit) {
  const auto [init, statics] = pddl::split_by_kind(domain, problem.init);
  const std::vector<pddl::GroundAction> actions = all_ground_actions(domain, problem);
  std::map<pddl::FactSet, std::size_t> depth{{init, 0}};
  std::deque<pddl::FactSet> queue{init};
  while (!queue.empty() && depth.size() <= limit) {
    const pddl::FactSet s = std::move(queue.front());
    queue.pop_front();
    const std::size_t d = depth.at(s);
    if (!visit(s, d)) return;
    for (const pddl::GroundAction& a : actions) {
      if (!pddl::applicable(a, s, statics)) continue;
      pddl::FactSet next = pddl::apply(a, s);
      if (depth.emplace(next, d + 1).second) queue.push_back(std::move(next));
    }
  }
}

}  // namespace

std::optional<std::size_t> bfs_optimal_length(const pddl::Domain& domain, const pddl::Problem& problem,
                                              std::size_t limit) {
  std::optional<std::size_t> found;
  bfs(domain, problem, limit, [&](const pddl::FactSet& s, std::size_t d) {
    if (pddl::satisfies(s, problem.goal)) found = d;
    return !found;
  });
  return found;
}

std::set<pddl::FactSet> bfs_reachable(const pddl::Domain& domain, const pddl::Problem& problem, std::size_t limit) {
  std::set<pddl::FactSet> out;
  bfs(domain, problem, limit, [&](const pddl::FactSet& s, std::size_t) {
    out.insert(s);
    return true;
  });
  return out;
}

BlocksInstance gen_blocksworld(const pddl::Domain& domain, std::size_t n_blocks, std::uint64_t seed,
                               bool allow_trivial) {
  if (n_blocks == 0) throw SchemaError("blocks world needs at least one block");
  std::vector<std::string> blocks;
  for (std::size_t i = 1; i <= n_blocks; ++i) blocks.push_back("b" + std::to_string(i));
  Rng rng(hash_combine(seed, n_blocks));

  Towers start = random_towers(blocks, rng);
  Towers goal = random_towers(blocks, rng);
  // One block has a single configuration; otherwise redraw until they differ.
  for (int tries = 0; !allow_trivial && n_blocks > 1 && support_literals(goal) == support_literals(start) && tries < 100;
       ++tries) {
    goal = random_towers(blocks, rng);
  }

  BlocksInstance out;
  pddl::Problem& p = out.problem;
  p.name = "bw-" + std::to_string(n_blocks) + "-" + std::to_string(seed);
  p.domain_name = domain.name;
  for (const std::string& b : blocks) p.objects.push_back({b, "block"});
  p.init = tower_state(start);
  p.goal = support_literals(goal);

  if (n_blocks <= 5) {
    const std::optional<std::size_t> len = bfs_optimal_length(domain, p);
    if (!len) throw NoPlan(p.name + " is unsolvable");
    out.l_gt = *len;
  } else {
    const pddl::Plan plan = planner::plan(planner::ground(domain, p, {}, {}), nullptr);
    const pddl::ValidationReport v = pddl::validate_plan(domain, p, plan, {});
    if (!v.ok) throw NoPlan(p.name + ": planner output failed validation");
    out.l_gt = plan.steps.size();
  }
  return out;
}

}  // namespace planact::harness
