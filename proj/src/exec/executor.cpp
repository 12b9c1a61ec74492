#include "planact/exec/executor.hpp"

#include <algorithm>
#include <utility>

#include "planact/common/error.hpp"
#include "planact/common/random.hpp"
#include "planact/common/text.hpp"

namespace planact::exec {

namespace {

bool is_flag(const std::string& p) {
  const auto& flags = world::object_flags();
  return std::find(flags.begin(), flags.end(), p) != flags.end();
}

template <typename T>
const T* geom_of(const SlotValue& v) {
  return v.geom ? std::get_if<T>(&*v.geom) : nullptr;
}

void erase_about(pddl::FactSet& facts, const std::string& predicate, const std::string& first_arg) {
  std::erase_if(facts, [&](const pddl::Fact& f) {
    return f.predicate == predicate && !f.args.empty() && f.args.front() == first_arg;
  });
}

const std::string kRobotSlot = "robot.q";

}  // namespace

Executor::Executor(const pddl::Domain& domain, world::World& world, ExecOptions options,
                   planner::SamplerStats* stats)
    : domain_(domain), world_(world), options_(options), stats_(stats), belief_(world.scene()) {
  scanned_ = belief_.scanned;
  for (const std::string& r : scanned_) observed_.insert({"scanned", {r}});
}

void Executor::sync_belief() {
  belief_ = world_.scene();
  geometry_.reset();
  for (const std::string& r : belief_.scanned) {
    if (scanned_.insert(r).second) observed_.insert({"scanned", {r}});
  }
}

void Executor::log(const std::string& line) { trace_.push_back(std::to_string(world_.steps()) + " " + line); }

std::shared_ptr<const geom::SceneGeometry> Executor::belief_geometry() {
  if (!geometry_) geometry_ = std::make_shared<const geom::SceneGeometry>(belief_.geometry());
  return geometry_;
}

const SlotValue& Executor::slot(const std::string& name) const {
  auto it = board_.find(name);
  if (it == board_.end()) throw UnknownVariable("blackboard slot " + name);
  return it->second;
}

geom::SamplerValue Executor::sampler_value(const std::string& slot_name) const {
  const SlotValue& v = slot(slot_name);
  return {v.symbol, v.geom};
}

void Executor::set_robot_slot() {
  belief_.robot.conf = world_.scene().robot.conf;
  board_[kRobotSlot] = {"robot.q#" + std::to_string(moves_), belief_.robot.conf};
}

void Executor::start(const planner::CombinedAction& action, CSubBT tree, const planner::ValueMap& values) {
  action_ = action;
  tree_ = std::move(tree);
  tree_.status = TreeStatus::Idle;
  report_.reset();
  last_failure_.reset();
  last_exhausted_.reset();
  last_fault_.clear();
  ticks_ = 0;
  board_.clear();
  for (const auto& [slot_name, symbol] : tree_.bindings) {
    SlotValue v{symbol, std::nullopt};
    if (auto it = values.find(symbol); it != values.end() && !it->second.optimistic) v.geom = it->second.geom;
    if (const world::ObjectState* o = belief_.find_object(symbol)) v.geom = o->shape;
    if (const world::Furniture* f = belief_.find_furniture(symbol)) v.geom = f->rect;
    board_[slot_name] = std::move(v);
  }
  set_robot_slot();

  nodes_.clear();
  parent_.clear();
  children_.clear();
  const auto visit = [&](auto&& self, const Node& n, std::size_t parent) -> std::size_t {
    const std::size_t id = nodes_.size();
    nodes_.push_back(&n);
    parent_.push_back(parent);
    children_.emplace_back();
    for (const Node& c : n.children) {
      const std::size_t cid = self(self, c, id);
      children_[id].push_back(cid);
    }
    return id;
  };
  visit(visit, tree_.root, 0);
  states_.clear();
  states_.resize(nodes_.size());
  log("start " + tree_.name);
}

void Executor::reset_states(std::size_t id) {
  states_[id].idx = 0;
  states_[id].retry = false;
  for (std::size_t c : children_[id]) reset_states(c);
}

bool Executor::retryable(std::size_t id) const {
  if (nodes_[id]->type != NodeType::Sampler) return false;
  const NodeState& st = states_[id];
  return st.cursor && !st.broken && !st.cursor->exhausted();
}

Executor::Status Executor::tick_node(std::size_t id) {
  const Node& n = *nodes_[id];
  NodeState& st = states_[id];
  const std::vector<std::size_t>& ch = children_[id];
  switch (n.type) {
    case NodeType::Sequence:
      while (st.idx < ch.size()) {
        const Status s = tick_node(ch[st.idx]);
        if (s == Status::Running) return Status::Running;
        if (s == Status::Success) {
          ++st.idx;
          if (acted_ && st.idx < ch.size()) return Status::Running;
          continue;
        }
        // Chronological backtracking to the closest sampler with values left.
        std::size_t j = st.idx;
        bool found = false;
        while (j > 0 && !found) found = retryable(ch[--j]);
        if (!found) return Status::Failure;
        for (std::size_t k = j + 1; k <= st.idx && k < ch.size(); ++k) reset_states(ch[k]);
        states_[ch[j]].retry = true;
        st.idx = j;
      }
      return Status::Success;
    case NodeType::Fallback:
      while (st.idx < ch.size()) {
        const Status s = tick_node(ch[st.idx]);
        if (s != Status::Failure) return s;
        ++st.idx;
      }
      return Status::Failure;
    case NodeType::Condition:
      return tick_condition(id);
    case NodeType::Sampler:
      return tick_sampler(id);
    case NodeType::Action:
      return tick_action(id);
  }
  return Status::Failure;
}

Executor::Status Executor::tick_sampler(std::size_t id) {
  const Node& n = *nodes_[id];
  NodeState& st = states_[id];
  geom::SamplerInputs inputs;
  std::string signature = n.sampler;
  try {
    for (const std::string& in : n.inputs) {
      inputs.push_back(sampler_value(in));
      signature += " " + inputs.back().name;
    }
    const bool retry = std::exchange(st.retry, false);
    if (!st.cursor || (!retry && st.signature != signature)) {
      st.cursor = std::make_unique<geom::SamplerCursor>(geom::make_sampler(n.sampler, belief_geometry()),
                                                        std::move(inputs), hash_combine(options_.seed, fnv1a(signature)));
      st.signature = signature;
      st.broken = false;
    }
    if (st.broken || (n.budget > 0 && st.cursor->yielded() >= n.budget)) {
      last_exhausted_ = id;
      return Status::Failure;
    }
    if (stats_) {
      ++stats_->exec_phase;
      ++stats_->exec_by_sampler[n.sampler];
    }
    std::optional<geom::SamplerOutputs> out = st.cursor->next();
    if (!out) {
      last_exhausted_ = id;
      log("exhausted " + n.sampler + " after " + std::to_string(st.cursor->yielded()));
      return Status::Failure;
    }
    for (std::size_t i = 0; i < n.outputs.size() && i < out->size(); ++i) {
      board_[n.outputs[i]] = {n.outputs[i] + "#" + std::to_string(st.cursor->yielded()), (*out)[i]};
    }
    // A full cursor flips to exhausted without another sampler call.
    if (st.cursor->next_index() >= st.cursor->sampler().capacity()) st.cursor->next();
    return Status::Success;
  } catch (const Error& e) {
    // Inputs without usable geometry (an unresolved placeholder, say).
    st.broken = true;
    last_exhausted_ = id;
    log(std::string("sampler ") + n.sampler + " unusable: " + e.what());
    return Status::Failure;
  }
}

Executor::Status Executor::tick_condition(std::size_t id) {
  const Node& n = *nodes_[id];
  std::optional<SlotValue> out;
  bool ok = false;
  try {
    ok = evaluate(n, out);
  } catch (const Error&) {
    ok = false;
  }
  if (!ok) {
    last_failure_ = id;
    return Status::Failure;
  }
  if (!n.out.empty() && out) board_[n.out] = *out;
  return Status::Success;
}

world::Observation Executor::look(const std::string& region) {
  world::Observation obs = world_.perceive({region, world_.scene().robot.conf});
  absorb(obs);
  return obs;
}

void Executor::absorb(const world::Observation& obs) {
  const world::Furniture* region = obs.query.region.empty() ? nullptr : belief_.find_furniture(obs.query.region);
  for (world::ObjectState& o : belief_.objects) {
    const world::Detection* d = obs.find(o.id);
    if (d != nullptr) {
      o.pose = d->pose;
      o.flags = d->flags;
      if (belief_.robot.holding == o.id) belief_.robot.holding.clear();
      erase_about(observed_, "on", o.id);
      for (const std::string& f : world::object_flags()) erase_about(observed_, f, o.id);
      if (!d->region.empty()) observed_.insert({"on", {o.id, d->region}});
      for (const std::string& f : d->flags) observed_.insert({f, {o.id}});
      continue;
    }
    if (!o.pose || belief_.occluded(o)) continue;
    if (!obs.query.region.empty() && (region == nullptr || !region->rect.contains(o.pose->position()))) continue;
    if (obs.query.viewpoint &&
        geom::distance(obs.query.viewpoint->position(), o.pose->position()) > belief_.params.sensor_range) {
      continue;
    }
    // Expected here but not seen.
    o.pose.reset();
    erase_about(observed_, "on", o.id);
  }
  std::erase_if(observed_, [](const pddl::Fact& f) { return f.predicate == "holding"; });
  if (!obs.held.empty()) {
    observed_.insert({"holding", {belief_.robot.arm, obs.held}});
    for (const std::string& f : world::object_flags()) erase_about(observed_, f, obs.held);
    for (const std::string& f : obs.held_flags) observed_.insert({f, {obs.held}});
    if (world::ObjectState* o = belief_.find_object(obs.held)) o->flags = obs.held_flags;
  }
  geometry_.reset();
}

bool Executor::evaluate(const Node& n, std::optional<SlotValue>& out) {
  const auto arg = [&](std::size_t i) -> const SlotValue& {
    if (i >= n.args.size()) throw ArityMismatch("condition " + n.predicate);
    return slot(n.args[i]);
  };
  bool holds = false;
  if (n.predicate == "detected") {
    const std::string& o = arg(0).symbol;
    const world::Observation obs = look(arg(1).symbol);
    if (const world::Detection* d = obs.find(o)) {
      out = SlotValue{"obs:" + o, d->pose};
      holds = true;
    }
  } else if (n.predicate == "supported") {
    look(arg(2).symbol);
    const SlotValue& p = arg(1);
    if (const geom::Pose* pose = geom_of<geom::Pose>(p)) {
      const auto sampler = geom::make_sampler("stable_pose", belief_geometry());
      holds = sampler->check({sampler_value(n.args[0]), sampler_value(n.args[2])}, {*pose});
      if (holds) out = p;
    }
  } else if (n.predicate == "kin") {
    const SlotValue& t = arg(5);
    if (const geom::Traj* traj = geom_of<geom::Traj>(t)) {
      geom::SamplerInputs in;
      for (std::size_t i = 0; i < 5; ++i) in.push_back(sampler_value(n.args[i]));
      const auto sampler = geom::make_sampler("ik", belief_geometry());
      holds = sampler->check(in, {*traj});
      if (holds) out = t;
    }
  } else if (n.predicate == "closed") {
    const world::Furniture* f = belief_.find_furniture(arg(0).symbol);
    holds = f != nullptr && f->closed;
  } else if (is_flag(n.predicate)) {
    const std::string& o = arg(0).symbol;
    const world::Observation obs = world_.perceive({"", world_.scene().robot.conf});
    absorb(obs);
    if (obs.held == o) {
      holds = obs.held_flags.count(n.predicate) != 0;
    } else if (const world::Detection* d = obs.find(o)) {
      holds = d->flags.count(n.predicate) != 0;
    }
  } else {
    throw UnknownPredicate("no evaluator for condition " + n.predicate);
  }
  return n.negated ? !holds : holds;
}

Executor::Status Executor::tick_action(std::size_t id) {
  const Node& n = *nodes_[id];
  const auto param = [&](std::size_t i) -> const SlotValue& {
    if (i >= n.params.size()) throw ArityMismatch(std::string("action ") + world::to_string(n.action));
    return slot(n.params[i]);
  };
  world::Command cmd;
  cmd.kind = n.action;
  std::string fault;
  try {
    switch (n.action) {
      case world::CommandKind::MoveBase:
        if (const auto* q = geom_of<geom::BaseConfig>(param(0))) cmd.conf = *q;
        if (const auto* t = geom_of<geom::Traj>(param(1))) cmd.traj = *t;
        break;
      case world::CommandKind::Scan:
        cmd.region = param(0).symbol;
        break;
      case world::CommandKind::PreApproach:
      case world::CommandKind::Approach:
        if (const auto* t = geom_of<geom::Traj>(param(0))) cmd.traj = *t;
        break;
      case world::CommandKind::Grasp:
        cmd.object = param(0).symbol;
        if (const auto* g = geom_of<geom::Grasp>(param(1))) cmd.grasp = *g;
        if (const auto* t = geom_of<geom::Traj>(param(2))) cmd.traj = *t;
        break;
      case world::CommandKind::Release:
        cmd.object = param(0).symbol;
        if (const auto* p = geom_of<geom::Pose>(param(1))) cmd.pose = *p;
        break;
      case world::CommandKind::ToggleState:
        cmd.object = param(0).symbol;
        cmd.region = param(1).symbol;
        cmd.toggle = n.toggle;
        break;
    }
  } catch (const Error& e) {
    fault = e.what();
  }

  world::ActuationResult r;
  if (fault.empty()) {
    r = world_.execute(cmd);
    acted_ = true;
    if (!r.ok) fault = r.fault;
  }
  log(std::string(world::to_string(n.action)) + (fault.empty() ? " ok" : " fault: " + fault));
  if (!fault.empty()) {
    last_fault_ = fault;
    last_failure_ = id;
    return Status::Failure;
  }

  switch (n.action) {
    case world::CommandKind::MoveBase:
      ++moves_;
      set_robot_slot();
      geometry_.reset();
      break;
    case world::CommandKind::Scan:
      if (world::Furniture* f = belief_.find_furniture(cmd.region)) {
        if (f->kind == world::FurnitureKind::Drawer || f->kind == world::FurnitureKind::Cover) f->closed = false;
      }
      scanned_.insert(cmd.region);
      belief_.scanned.insert(cmd.region);
      observed_.insert({"scanned", {cmd.region}});
      if (r.observation) absorb(*r.observation);
      break;
    case world::CommandKind::Grasp:
      if (world::ObjectState* o = belief_.find_object(cmd.object)) o->pose.reset();
      belief_.robot.holding = cmd.object;
      belief_.robot.grasp = *cmd.grasp;
      erase_about(observed_, "on", cmd.object);
      observed_.insert({"holding", {belief_.robot.arm, cmd.object}});
      geometry_.reset();
      break;
    case world::CommandKind::Release:
      if (world::ObjectState* o = belief_.find_object(cmd.object)) o->pose = cmd.pose;
      belief_.robot.holding.clear();
      std::erase_if(observed_, [](const pddl::Fact& f) { return f.predicate == "holding"; });
      geometry_.reset();
      break;
    case world::CommandKind::ToggleState:
    case world::CommandKind::PreApproach:
    case world::CommandKind::Approach:
      break;
  }
  return Status::Success;
}

pddl::Literal Executor::literal_of(const Node& n) const {
  const auto symbol = [&](const std::string& s) {
    auto it = board_.find(s);
    return it == board_.end() ? s : it->second.symbol;
  };
  pddl::Literal l;
  l.positive = !n.negated;
  if (n.type == NodeType::Condition) {
    l.atom.predicate = n.predicate == "detected" ? "on" : n.predicate;
    for (const std::string& a : n.args) l.atom.args.push_back(symbol(a));
    return l;
  }
  // Exhausted sampler without a failed condition: name the static literal the
  // sampler would certify.
  std::vector<std::string> in;
  for (const std::string& a : n.inputs) in.push_back(symbol(a));
  const std::string out = n.outputs.empty() ? "?out" : symbol(n.outputs.front());
  if (n.sampler == "base_motion" && in.size() == 2) {
    l.atom = {"basemotion", {in[0], out, in[1]}};
  } else if (n.sampler == "ik") {
    l.atom = {"kin", in};
    l.atom.args.push_back(out);
  } else if (n.sampler == "stable_pose" && in.size() == 2) {
    l.atom = {"supported", {in[0], out, in[1]}};
  } else if (n.sampler == "view_conf" && !in.empty()) {
    l.atom = {"viewconf", {in[0], out}};
  } else if (n.sampler == "approach_conf" && in.size() == 2) {
    l.atom = {"approachconf", {in[0], in[1], out}};
  } else {
    l.atom = {"grasp", {in.empty() ? "?o" : in[0], out}};
  }
  return l;
}

pddl::Literal Executor::failed_constraint(std::vector<FeedingCursor>& cursors) const {
  const auto feeders_under = [&](std::size_t root) {
    std::vector<std::size_t> stack{root};
    while (!stack.empty()) {
      const std::size_t id = stack.back();
      stack.pop_back();
      if (nodes_[id]->type == NodeType::Sampler && states_[id].cursor) {
        cursors.push_back({nodes_[id]->sampler, states_[id].cursor.get()});
      }
      for (auto it = children_[id].rbegin(); it != children_[id].rend(); ++it) stack.push_back(*it);
    }
  };
  if (last_failure_ && nodes_[*last_failure_]->type == NodeType::Condition) {
    std::size_t a = *last_failure_;
    while (a != 0 && nodes_[a]->type != NodeType::Fallback) a = parent_[a];
    if (nodes_[a]->type == NodeType::Fallback) feeders_under(a);
    return literal_of(*nodes_[*last_failure_]);
  }
  if (last_failure_) {
    // Actuation fault: the action's first logical effect was not achieved.
    const pddl::GroundAction& a = action_.constituents.back();
    for (const pddl::Fact& f : a.eff_plus) {
      if (domain_.is_logical(f.predicate)) return {f, true};
    }
    return {a.eff_plus.empty() ? pddl::Fact{a.schema, a.args} : *a.eff_plus.begin(), true};
  }
  if (last_exhausted_) {
    cursors.push_back({nodes_[*last_exhausted_]->sampler, states_[*last_exhausted_].cursor.get()});
    return literal_of(*nodes_[*last_exhausted_]);
  }
  return {{tree_.name, {}}, true};
}

bool Executor::post_check(pddl::Literal& failed) {
  for (const pddl::GroundAction& a : action_.constituents) {
    for (const pddl::Fact& f : a.eff_plus) {
      if (!domain_.is_logical(f.predicate)) continue;
      bool ok = true;
      if (f.predicate == "holding" && f.args.size() == 2) {
        ok = world_.perceive({"", world_.scene().robot.conf}).held == f.args[1];
      } else if (f.predicate == "handempty") {
        ok = world_.perceive({"", world_.scene().robot.conf}).held.empty();
      } else if (f.predicate == "on" && f.args.size() == 2) {
        const world::Observation obs = look(f.args[1]);
        const world::Detection* d = obs.find(f.args[0]);
        ok = d != nullptr && d->region == f.args[1];
      } else if (f.predicate == "scanned" && f.args.size() == 1) {
        ok = scanned_.count(f.args[0]) != 0;
      } else if (is_flag(f.predicate) && f.args.size() == 1) {
        const world::Observation obs = world_.perceive({"", world_.scene().robot.conf});
        absorb(obs);
        const world::Detection* d = obs.find(f.args[0]);
        ok = (obs.held == f.args[0] && obs.held_flags.count(f.predicate)) ||
             (d != nullptr && d->flags.count(f.predicate));
      }
      if (!ok) {
        failed = {f, true};
        return false;
      }
    }
  }
  return true;
}

void Executor::fail_with(const pddl::Literal& constraint, const std::vector<FeedingCursor>& cursors) {
  const pddl::GroundAction& a = action_.constituents.back();
  report_ = emit_anomaly(action_.name, a.args, constraint, cursors, observed_, world_.snapshot_id(), world_.steps());
  tree_.status = TreeStatus::Failed;
  log("failed " + tree_.name + " on " + pddl::to_string(constraint) +
      (last_fault_.empty() ? "" : " (" + last_fault_ + ")"));
}

TreeStatus Executor::tick() {
  if (tree_.status == TreeStatus::Succeeded || tree_.status == TreeStatus::Failed) return tree_.status;
  tree_.status = TreeStatus::Running;
  acted_ = false;
  const Status s = tick_node(0);
  ++ticks_;
  if (s == Status::Running) {
    if (ticks_ >= options_.tick_cap) {
      last_fault_ = "tick cap reached";
      fail_with({{tree_.name, {}}, true}, {});
    }
    return tree_.status;
  }
  if (s == Status::Success) {
    pddl::Literal failed;
    if (post_check(failed)) {
      tree_.status = TreeStatus::Succeeded;
      log("succeeded " + tree_.name);
    } else {
      fail_with(failed, {});
    }
    return tree_.status;
  }
  std::vector<FeedingCursor> cursors;
  const pddl::Literal constraint = failed_constraint(cursors);
  fail_with(constraint, cursors);
  return tree_.status;
}

TreeRun Executor::run(const planner::CombinedAction& action, CSubBT tree, const planner::ValueMap& values) {
  start(action, std::move(tree), values);
  while (tick() == TreeStatus::Running) {
  }
  return {tree_.status, report_, ticks_};
}

PlanRun Executor::execute_plan(const pddl::Plan& plan, const planner::ValueMap& values) {
  PlanRun out;
  for (const planner::CombinedAction& a : planner::combine_actions(plan)) {
    CSubBT tree = compile(a, domain_, belief_.capacities);
    out.xml.push_back(serialize_tree(tree));
    ++out.executed;
    const TreeRun r = run(a, std::move(tree), values);
    if (r.status != TreeStatus::Succeeded) {
      out.report = r.report;
      return out;
    }
  }
  out.success = true;
  return out;
}

}  // namespace planact::exec
