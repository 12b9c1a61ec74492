#include "planact/planner/search.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <tuple>
#include <unordered_map>

#include <boost/functional/hash.hpp>

#include "planact/common/error.hpp"

namespace planact::planner {

namespace {

using Bits = std::vector<std::uint64_t>;

struct BitsHash {
  std::size_t operator()(const Bits& b) const { return boost::hash_range(b.begin(), b.end()); }
};

bool test(const Bits& b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1U; }
void set(Bits& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }
void reset(Bits& b, std::size_t i) { b[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }

struct CompiledAction {
  std::vector<std::size_t> pre_plus, pre_minus, add, del;
};

/// Integer encoding of the fluent facts a task can ever mention.
class Encoding {
 public:
  explicit Encoding(const GroundTask& task) {
    for (const pddl::Fact& f : task.init) id(f);
    for (const pddl::GroundAction& a : task.actions) {
      for (const auto* set : {&a.pre_plus, &a.pre_minus, &a.eff_plus, &a.eff_minus}) {
        for (const pddl::Fact& f : *set) id(f);
      }
    }
    for (const pddl::Literal& l : task.problem.goal) id(l.atom);
    words_ = (facts_.size() + 63) / 64;
    for (const pddl::GroundAction& a : task.actions) {
      CompiledAction c;
      for (const pddl::Fact& f : a.pre_plus) c.pre_plus.push_back(index_.at(f));
      for (const pddl::Fact& f : a.pre_minus) c.pre_minus.push_back(index_.at(f));
      for (const pddl::Fact& f : a.eff_plus) c.add.push_back(index_.at(f));
      for (const pddl::Fact& f : a.eff_minus) c.del.push_back(index_.at(f));
      actions_.push_back(std::move(c));
    }
    by_first_.resize(facts_.size());
    for (std::size_t i = 0; i < actions_.size(); ++i) {
      if (actions_[i].pre_plus.empty()) {
        unconditional_.push_back(i);
      } else {
        by_first_[actions_[i].pre_plus.front()].push_back(i);
      }
    }
    for (const pddl::Literal& l : task.problem.goal) goal_.emplace_back(index_.at(l.atom), l.positive);
  }

  Bits encode(const pddl::FactSet& s) const {
    Bits b(words_, 0);
    for (const pddl::Fact& f : s) {
      if (auto it = index_.find(f); it != index_.end()) set(b, it->second);
    }
    return b;
  }

  pddl::FactSet decode(const Bits& b) const {
    pddl::FactSet out;
    for (std::size_t i = 0; i < facts_.size(); ++i) {
      if (test(b, i)) out.insert(facts_[i]);
    }
    return out;
  }

  std::size_t goal_count(const Bits& b) const {
    std::size_t h = 0;
    for (const auto& [i, positive] : goal_) h += test(b, i) != positive ? 1 : 0;
    return h;
  }

  /// Applicable action indices in ascending order.
  std::vector<std::size_t> applicable(const Bits& b) const {
    std::vector<std::size_t> out = unconditional_;
    for (std::size_t f = 0; f < facts_.size(); ++f) {
      if (!test(b, f)) continue;
      out.insert(out.end(), by_first_[f].begin(), by_first_[f].end());
    }
    std::sort(out.begin(), out.end());
    std::erase_if(out, [&](std::size_t i) {
      const CompiledAction& a = actions_[i];
      return !std::all_of(a.pre_plus.begin(), a.pre_plus.end(), [&](std::size_t f) { return test(b, f); }) ||
             std::any_of(a.pre_minus.begin(), a.pre_minus.end(), [&](std::size_t f) { return test(b, f); });
    });
    return out;
  }

  Bits successor(const Bits& b, std::size_t action) const {
    Bits out = b;
    for (std::size_t f : actions_[action].del) reset(out, f);
    for (std::size_t f : actions_[action].add) set(out, f);
    return out;
  }

 private:
  void id(const pddl::Fact& f) {
    if (index_.emplace(f, facts_.size()).second) facts_.push_back(f);
  }

  std::map<pddl::Fact, std::size_t> index_;
  std::vector<pddl::Fact> facts_;
  std::size_t words_ = 0;
  std::vector<CompiledAction> actions_;
  std::vector<std::vector<std::size_t>> by_first_;
  std::vector<std::size_t> unconditional_;
  std::vector<std::pair<std::size_t, bool>> goal_;
};

}  // namespace

std::optional<pddl::Plan> search(const GroundTask& task, SearchStats* stats, std::size_t max_expansions) {
  const Encoding enc(task);
  struct Node {
    Bits state;
    std::size_t parent;
    std::size_t action;
    std::size_t g;
  };
  std::vector<Node> nodes;
  std::unordered_map<Bits, std::size_t, BitsHash> seen;
  using Key = std::tuple<std::size_t, std::size_t, std::size_t>;  // h, g, node id
  std::priority_queue<Key, std::vector<Key>, std::greater<>> open;

  const auto extract = [&](std::size_t id) {
    pddl::Plan p;
    for (; id != 0; id = nodes[id].parent) p.steps.push_back(task.actions[nodes[id].action]);
    std::reverse(p.steps.begin(), p.steps.end());
    return p;
  };

  nodes.push_back({enc.encode(task.init), 0, 0, 0});
  seen.emplace(nodes[0].state, 0);
  open.emplace(enc.goal_count(nodes[0].state), 0, 0);
  std::size_t expanded = 0;
  while (!open.empty() && expanded < max_expansions) {
    const auto [h, g, id] = open.top();
    open.pop();
    if (h == 0) {
      if (stats) stats->expanded = expanded, stats->generated = nodes.size();
      return extract(id);
    }
    ++expanded;
    const Bits state = nodes[id].state;
    for (std::size_t a : enc.applicable(state)) {
      Bits next = enc.successor(state, a);
      if (seen.count(next)) continue;
      const std::size_t nid = nodes.size();
      seen.emplace(next, nid);
      const std::size_t nh = enc.goal_count(next);
      nodes.push_back({std::move(next), id, a, g + 1});
      open.emplace(nh, g + 1, nid);
    }
  }
  if (stats) stats->expanded = expanded, stats->generated = nodes.size();
  return std::nullopt;
}

pddl::Plan plan(const GroundTask& task, SearchStats* stats) {
  std::optional<pddl::Plan> p = search(task, stats);
  if (!p) throw NoPlan("no plan for " + task.problem.name);
  return *std::move(p);
}

std::set<pddl::FactSet> reachable_states(const GroundTask& task, std::size_t limit) {
  const Encoding enc(task);
  std::unordered_map<Bits, bool, BitsHash> seen;
  std::deque<Bits> frontier{enc.encode(task.init)};
  seen.emplace(frontier.front(), true);
  std::set<pddl::FactSet> out;
  while (!frontier.empty() && out.size() < limit) {
    Bits s = std::move(frontier.front());
    frontier.pop_front();
    for (std::size_t a : enc.applicable(s)) {
      Bits next = enc.successor(s, a);
      if (seen.emplace(next, true).second) frontier.push_back(std::move(next));
    }
    out.insert(enc.decode(s));
  }
  return out;
}

}  // namespace planact::planner
