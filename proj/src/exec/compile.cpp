#include "planact/exec/compile.hpp"

#include <algorithm>

#include "planact/common/error.hpp"
#include "planact/world/scene.hpp"

namespace planact::exec {

namespace {

using world::CommandKind;

std::string template_for(const std::string& schema) {
  if (schema == "scan_table" || schema == "scan_drawer" || schema == "scan_cover") return "scan";
  if (schema == "clean" || schema == "heat" || schema == "cook") return "toggle-state";
  if (schema == "move" || schema == "pick" || schema == "place") return schema;
  return "";
}

void bind(CSubBT& t, const pddl::Domain& domain, const pddl::GroundAction& a) {
  const pddl::ActionSchema* schema = domain.find_action(a.schema);
  if (schema == nullptr) throw NoTemplate("no schema for " + a.schema);
  for (std::size_t i = 0; i < schema->params.size() && i < a.args.size(); ++i) {
    t.bindings[a.schema + "." + schema->params[i].name.substr(1)] = a.args[i];
  }
}

std::vector<Node> base_motion_to(const std::string& target, const std::string& path,
                                 const geom::SamplerCapacities& caps) {
  return {Node::sampler_node("base_motion", {"robot.q", target}, {path}, caps.base_motion),
          Node::action_node(CommandKind::MoveBase, {target, path})};
}

/// Negative flag and closed preconditions of `a`, checked from observations.
std::vector<Node> guard_conditions(const pddl::Domain& domain, const pddl::GroundAction& a) {
  std::vector<Node> out;
  const pddl::ActionSchema* schema = domain.find_action(a.schema);
  for (const pddl::Atom& pre : schema->pre_minus) {
    const auto& flags = world::object_flags();
    const bool flag = std::find(flags.begin(), flags.end(), pre.predicate) != flags.end();
    if (!flag && pre.predicate != "closed") continue;
    std::vector<std::string> args;
    for (const std::string& v : pre.args) args.push_back(a.schema + "." + v.substr(1));
    out.push_back(Node::condition(pre.predicate, args, "", true));
  }
  return out;
}

Node pick_body(const geom::SamplerCapacities& caps, std::vector<Node> prefix) {
  // Re-perceive from every viewpoint before giving up on the object, then
  // return to the approach conf.
  std::vector<Node> look = {Node::sampler_node("view_conf", {"pick.r", "pick.q"}, {"look.q"}, caps.view)};
  for (Node& n : base_motion_to("look.q", "look.path", caps)) look.push_back(std::move(n));
  look.push_back(Node::action_node(CommandKind::Scan, {"pick.r"}));
  look.push_back(Node::condition("detected", {"pick.o", "pick.r"}, "pick.target"));
  for (Node& n : base_motion_to("pick.q", "back.path", caps)) look.push_back(std::move(n));

  std::vector<Node> seq = std::move(prefix);
  seq.push_back(Node::fallback({Node::condition("detected", {"pick.o", "pick.r"}, "pick.target"),
                                Node::sequence(std::move(look))}));
  seq.push_back(Node::fallback(
      {Node::condition("kin", {"pick.a", "pick.o", "pick.target", "pick.g", "robot.q", "pick.t"}, "pick.traj"),
       Node::sequence({Node::sampler_node("ik", {"pick.a", "pick.o", "pick.target", "pick.g", "robot.q"},
                                          {"pick.ik"}, caps.ik),
                       Node::condition("kin", {"pick.a", "pick.o", "pick.target", "pick.g", "robot.q", "pick.ik"},
                                       "pick.traj")})}));
  seq.push_back(Node::action_node(CommandKind::PreApproach, {"pick.traj"}));
  seq.push_back(Node::action_node(CommandKind::Approach, {"pick.traj"}));
  seq.push_back(Node::action_node(CommandKind::Grasp, {"pick.o", "pick.g", "pick.traj"}));
  return Node::sequence(std::move(seq));
}

Node place_body(const geom::SamplerCapacities& caps, std::vector<Node> prefix) {
  std::vector<Node> seq = std::move(prefix);
  seq.push_back(Node::fallback(
      {Node::condition("supported", {"place.o", "place.p", "place.r"}, "place.target"),
       Node::sequence({Node::sampler_node("stable_pose", {"place.o", "place.r"}, {"place.sp"}, caps.pose),
                       Node::condition("supported", {"place.o", "place.sp", "place.r"}, "place.target")})}));
  seq.push_back(Node::fallback(
      {Node::condition("kin", {"place.a", "place.o", "place.target", "place.g", "robot.q", "place.t"},
                       "place.traj"),
       Node::sequence({Node::sampler_node("ik", {"place.a", "place.o", "place.target", "place.g", "robot.q"},
                                          {"place.ik"}, caps.ik),
                       Node::condition("kin",
                                       {"place.a", "place.o", "place.target", "place.g", "robot.q", "place.ik"},
                                       "place.traj")})}));
  seq.push_back(Node::action_node(CommandKind::PreApproach, {"place.traj"}));
  seq.push_back(Node::action_node(CommandKind::Approach, {"place.traj"}));
  seq.push_back(Node::action_node(CommandKind::Release, {"place.o", "place.target"}));
  return Node::sequence(std::move(seq));
}

}  // namespace

const std::vector<std::string>& template_ids() {
  static const std::vector<std::string> ids = {"move",           "pick", "place",       "move-and-pick",
                                               "move-and-place", "scan", "toggle-state"};
  return ids;
}

CSubBT compile(const planner::CombinedAction& action, const pddl::Domain& domain,
               const geom::SamplerCapacities& caps) {
  if (action.constituents.empty()) throw NoTemplate("empty action " + action.name);
  CSubBT t;
  t.name = action.name;
  for (const pddl::GroundAction& a : action.constituents) bind(t, domain, a);
  const pddl::GroundAction& last = action.constituents.back();

  if (action.name == "move-and-pick" || action.name == "move-and-place") {
    t.template_id = action.name;
    std::vector<Node> prefix;
    if (last.schema == "place") prefix = guard_conditions(domain, last);
    for (Node& n : base_motion_to("move.q2", "move.path", caps)) prefix.push_back(std::move(n));
    t.root = last.schema == "pick" ? pick_body(caps, std::move(prefix)) : place_body(caps, std::move(prefix));
    return t;
  }
  if (action.constituents.size() != 1) throw NoTemplate(action.name);
  t.template_id = template_for(last.schema);
  if (t.template_id == "move") {
    t.root = Node::sequence(base_motion_to("move.q2", "move.path", caps));
  } else if (t.template_id == "pick") {
    t.root = pick_body(caps, {});
  } else if (t.template_id == "place") {
    t.root = place_body(caps, guard_conditions(domain, last));
  } else if (t.template_id == "scan") {
    t.root = Node::sequence({Node::action_node(CommandKind::Scan, {last.schema + ".r"})});
  } else if (t.template_id == "toggle-state") {
    t.root = Node::sequence({Node::action_node(CommandKind::ToggleState,
                                               {last.schema + ".o", last.schema + ".r"}, last.schema)});
  } else {
    throw NoTemplate(action.name);
  }
  return t;
}

}  // namespace planact::exec
