#include "gen.hpp"

#include <map>
#include <set>
#include <sstream>

#include "planact/exec/compile.hpp"
#include "planact/geom/samplers.hpp"

namespace planact::testgen {

namespace {

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[rng.below(v.size())];
}

bool coin(Rng& rng, double p = 0.5) { return rng.uniform() < p; }

std::string maybe_upper(Rng& rng, std::string s) {
  if (coin(rng, 0.25)) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return s;
}

struct PredDecl {
  std::string name;
  std::vector<std::string> types;
  bool fluent = false;
};

const std::vector<std::string> kWords = {"move", "the", "arm", "over", "a", "table", "quickly", "then", "stop"};

std::string atom_text(const std::string& pred, const std::vector<std::string>& args) {
  std::string out = "(" + pred;
  for (const std::string& a : args) out += " " + a;
  return out + ")";
}

}  // namespace

std::string random_domain_text(Rng& rng) {
  std::vector<std::pair<std::string, std::string>> types;  // name, parent
  const std::size_t n_types = rng.below(4);
  for (std::size_t i = 0; i < n_types; ++i) {
    std::string parent = "object";
    if (i > 0 && coin(rng)) parent = types[rng.below(i)].first;
    types.emplace_back("t" + std::to_string(i), parent);
  }
  std::vector<std::string> type_names = {"object"};
  for (const auto& [t, _] : types) type_names.push_back(t);

  std::vector<std::pair<std::string, std::string>> constants;
  if (coin(rng)) {
    const std::size_t n = 1 + rng.below(2);
    for (std::size_t i = 0; i < n; ++i) constants.emplace_back("c" + std::to_string(i), pick(rng, type_names));
  }

  std::vector<PredDecl> preds;
  const std::size_t n_preds = 1 + rng.below(6);
  for (std::size_t i = 0; i < n_preds; ++i) {
    PredDecl p;
    p.name = "p" + std::to_string(i);
    const std::size_t arity = rng.below(4);
    for (std::size_t k = 0; k < arity; ++k) p.types.push_back(pick(rng, type_names));
    p.fluent = coin(rng);
    preds.push_back(p);
  }
  preds.front().fluent = true;
  if (!types.empty() && coin(rng, 0.3)) {
    // Unary static named after a type.
    preds.push_back({types.front().first, {types.front().first}, false});
  }
  std::vector<const PredDecl*> fluents, statics;
  for (const PredDecl& p : preds) (p.fluent ? fluents : statics).push_back(&p);

  std::ostringstream os;
  os << "(define (domain " << maybe_upper(rng, "dom") << ")\n";
  if (coin(rng)) os << "  (:requirements :strips :typing)\n";
  if (!types.empty()) {
    os << "  (:types";
    for (const auto& [t, parent] : types) os << " " << maybe_upper(rng, t) << " - " << parent;
    os << ")\n";
  }
  if (!constants.empty()) {
    os << "  (:constants";
    for (const auto& [c, t] : constants) os << " " << c << " - " << t;
    os << ")\n";
  }
  os << "  (:predicates";
  for (const PredDecl& p : preds) {
    os << "\n    (" << maybe_upper(rng, p.name);
    for (std::size_t k = 0; k < p.types.size(); ++k) os << " ?v" << k << " - " << p.types[k];
    os << ")";
  }
  os << ")\n";

  auto write_action = [&](const std::string& name, std::vector<std::string> pos, std::vector<std::string> neg,
                          std::vector<std::string> add, std::vector<std::string> del,
                          const std::vector<std::pair<std::string, std::string>>& params) {
    if (coin(rng)) {
      os << "  ; @description";
      const std::size_t n = 1 + rng.below(5);
      for (std::size_t i = 0; i < n; ++i) os << " " << pick(rng, kWords);
      os << ".\n";
    }
    os << "  (:action " << maybe_upper(rng, name) << "\n    :parameters (";
    for (std::size_t i = 0; i < params.size(); ++i) os << (i ? " " : "") << params[i].first << " - " << params[i].second;
    os << ")\n    :precondition (and";
    for (const std::string& a : pos) os << " " << a;
    for (const std::string& a : neg) os << " (not " << a << ")";
    os << ")\n    :effect (and";
    for (const std::string& a : add) os << " " << a;
    for (const std::string& a : del) os << " (not " << a << ")";
    os << "))\n";
  };

  const std::size_t n_actions = rng.below(4);
  for (std::size_t ai = 0; ai < n_actions; ++ai) {
    std::vector<std::pair<std::string, std::string>> params;
    auto arg_for = [&](const std::string& type) {
      if (coin(rng, 0.2)) {
        for (const auto& [c, t] : constants) {
          if (t == type) return c;
        }
      }
      std::vector<std::string> same;
      for (const auto& [v, t] : params) {
        if (t == type) same.push_back(v);
      }
      if (!same.empty() && coin(rng, 0.6)) return pick(rng, same);
      std::string v = "?x" + std::to_string(params.size());
      params.emplace_back(v, type);
      return v;
    };
    auto atoms = [&](const std::vector<const PredDecl*>& from, std::size_t max) {
      std::vector<std::string> out;
      if (from.empty()) return out;
      const std::size_t n = rng.below(max + 1);
      for (std::size_t i = 0; i < n; ++i) {
        const PredDecl* p = pick(rng, from);
        std::vector<std::string> args;
        for (const std::string& t : p->types) args.push_back(arg_for(t));
        out.push_back(atom_text(p->name, args));
      }
      return out;
    };
    std::vector<std::string> pos = atoms(fluents, 2);
    for (std::string& s : atoms(statics, 2)) pos.push_back(s);
    std::vector<std::string> neg = atoms(fluents, 1);
    std::vector<std::string> add = atoms(fluents, 2);
    std::vector<std::string> del = atoms(fluents, 1);
    write_action("a" + std::to_string(ai), pos, neg, add, del, params);
  }
  // Every fluent occurs in some effect.
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::string> add;
  for (const PredDecl* p : fluents) {
    std::vector<std::string> args;
    for (const std::string& t : p->types) {
      std::string v = "?y" + std::to_string(params.size());
      params.emplace_back(v, t);
      args.push_back(v);
    }
    add.push_back(atom_text(p->name, args));
  }
  write_action("touch", {}, {}, add, {}, params);
  os << ")\n";
  return os.str();
}

std::string random_problem_text(Rng& rng, const pddl::Domain& domain) {
  std::vector<std::string> type_names = {"object"};
  for (const pddl::TypeDecl& t : domain.types) type_names.push_back(t.name);
  std::vector<pddl::TypedName> objects = domain.constants;
  std::vector<pddl::TypedName> declared;
  const std::size_t n = rng.below(6);
  for (std::size_t i = 0; i < n; ++i) declared.push_back({"o" + std::to_string(i), pick(rng, type_names)});
  objects.insert(objects.end(), declared.begin(), declared.end());

  auto ground = [&](const pddl::Predicate& p) -> std::optional<std::string> {
    std::vector<std::string> args;
    for (const pddl::TypedName& param : p.params) {
      std::vector<std::string> fits;
      for (const pddl::TypedName& o : objects) {
        if (domain.is_subtype(o.type, param.type)) fits.push_back(o.name);
      }
      if (fits.empty()) return std::nullopt;
      args.push_back(pick(rng, fits));
    }
    return atom_text(p.name, args);
  };

  std::ostringstream os;
  os << "(define (problem " << maybe_upper(rng, "prob") << ")\n  (:domain " << domain.name << ")\n  (:objects";
  for (const pddl::TypedName& o : declared) os << " " << maybe_upper(rng, o.name) << " - " << o.type;
  os << ")\n  (:init";
  if (!domain.predicates.empty()) {
    const std::size_t k = rng.below(8);
    for (std::size_t i = 0; i < k; ++i) {
      if (auto a = ground(pick(rng, domain.predicates))) os << " " << *a;
    }
  }
  os << ")\n  (:goal (and";
  if (!domain.predicates.empty()) {
    const std::size_t k = rng.below(4);
    for (std::size_t i = 0; i < k; ++i) {
      if (auto a = ground(pick(rng, domain.predicates))) os << " " << (coin(rng) ? "(not " + *a + ")" : *a);
    }
  }
  os << ")))\n";
  return os.str();
}

std::string random_streams_text(Rng& rng, const pddl::Domain& domain) {
  std::vector<const pddl::Predicate*> statics;
  for (const pddl::Predicate& p : domain.predicates) {
    if (p.kind != pddl::LiteralKind::Fluent && p.arity() > 0) statics.push_back(&p);
  }
  if (statics.empty()) return "";
  std::ostringstream os;
  os << "(define (stream " << maybe_upper(rng, "gen") << ")";
  const std::size_t n = 1 + rng.below(3);
  for (std::size_t si = 0; si < n; ++si) {
    const pddl::Predicate* cert = pick(rng, statics);
    std::vector<std::pair<std::string, std::string>> inputs, outputs;
    std::vector<std::string> args;
    const std::size_t forced = rng.below(cert->arity());
    for (std::size_t k = 0; k < cert->arity(); ++k) {
      const std::string& t = cert->params[k].type;
      if (k == forced || coin(rng)) {
        outputs.emplace_back("?o" + std::to_string(k), t);
        args.push_back(outputs.back().first);
      } else {
        inputs.emplace_back("?i" + std::to_string(k), t);
        args.push_back(inputs.back().first);
      }
    }
    std::vector<std::string> dom;
    for (const auto& [v, t] : inputs) {
      for (const pddl::Predicate* p : statics) {
        if (p->arity() == 1 && p->params[0].type == t && coin(rng, 0.4)) dom.push_back(atom_text(p->name, {v}));
      }
    }
    auto typed = [](const std::vector<std::pair<std::string, std::string>>& v) {
      std::string out;
      for (const auto& [name, t] : v) out += (out.empty() ? "" : " ") + name + " - " + t;
      return out;
    };
    os << "\n  (:stream " << maybe_upper(rng, "s" + std::to_string(si)) << "\n    :inputs (" << typed(inputs) << ")";
    if (!dom.empty()) {
      os << "\n    :domain (and";
      for (const std::string& d : dom) os << " " << d;
      os << ")";
    }
    os << "\n    :outputs (" << typed(outputs) << ")\n    :certified (and " << atom_text(cert->name, args) << "))";
  }
  os << ")\n";
  return os.str();
}

exec::Node random_node(Rng& rng, int depth) {
  static const std::vector<std::string> tokens = {"move.q2", "robot.q", "pick.o", "pick.p", "a&b", "x<y>",
                                                  "it's", "\"q\"", "place.r", "t1"};
  auto token_list = [&](std::size_t max) {
    std::vector<std::string> out;
    const std::size_t n = rng.below(max + 1);
    for (std::size_t i = 0; i < n; ++i) out.push_back(pick(rng, tokens));
    return out;
  };
  const std::uint64_t choice = depth <= 0 ? 2 + rng.below(3) : rng.below(5);
  switch (choice) {
    case 0:
    case 1: {
      std::vector<exec::Node> children;
      const std::size_t n = 1 + rng.below(3);
      for (std::size_t i = 0; i < n; ++i) children.push_back(random_node(rng, depth - 1));
      return choice == 0 ? exec::Node::sequence(std::move(children)) : exec::Node::fallback(std::move(children));
    }
    case 2:
      return exec::Node::condition(pick(rng, tokens), token_list(3), coin(rng) ? pick(rng, tokens) : "", coin(rng));
    case 3:
      return exec::Node::sampler_node(pick(rng, geom::sampler_kinds()), token_list(3), token_list(2), rng.below(40));
    default: {
      static const std::vector<world::CommandKind> kinds = {
          world::CommandKind::MoveBase, world::CommandKind::Scan,    world::CommandKind::PreApproach,
          world::CommandKind::Approach, world::CommandKind::Grasp,   world::CommandKind::Release,
          world::CommandKind::ToggleState};
      return exec::Node::action_node(pick(rng, kinds), token_list(3), coin(rng, 0.3) ? "clean" : "");
    }
  }
}

exec::CSubBT random_tree(Rng& rng) {
  exec::CSubBT t;
  t.name = pick(rng, std::vector<std::string>{"move-and-pick", "place", "scan_table", "a&b"});
  t.template_id = pick(rng, exec::template_ids());
  const std::size_t n = rng.below(5);
  for (std::size_t i = 0; i < n; ++i) t.bindings["slot" + std::to_string(i)] = "sym<" + std::to_string(rng.below(9)) + ">";
  t.root = random_node(rng, static_cast<int>(rng.below(4)));
  return t;
}

std::string random_text(Rng& rng, std::size_t max_len) {
  static const std::vector<std::string> pieces = {"a", "Z", "0", " ", "\n", "\t", "\"", "\\", "{", "}", "```",
                                                  "(", ")", "é", "→", "'", ":", ",", "?"};
  std::string out;
  const std::size_t n = rng.below(max_len + 1);
  for (std::size_t i = 0; i < n; ++i) out += pick(rng, pieces);
  return out;
}

pddl::FactSet random_facts(Rng& rng, std::size_t max_count) {
  static const std::vector<std::string> objs = {"a", "b", "c", "d"};
  pddl::FactSet out;
  const std::size_t n = rng.below(max_count + 1);
  for (std::size_t i = 0; i < n; ++i) {
    switch (rng.below(3)) {
      case 0: out.insert({"on", {pick(rng, objs), pick(rng, objs)}}); break;
      case 1: out.insert({"clear", {pick(rng, objs)}}); break;
      default: out.insert({"handempty", {}}); break;
    }
  }
  return out;
}

pddl::GroundAction random_ground_action(Rng& rng) {
  pddl::GroundAction a;
  a.schema = "act";
  a.pre_plus = random_facts(rng, 3);
  a.pre_minus = random_facts(rng, 2);
  a.eff_plus = random_facts(rng, 3);
  a.eff_minus = random_facts(rng, 3);
  for (const pddl::Fact& f : random_facts(rng, 2)) a.static_pre.insert({"k" + f.predicate, f.args});
  return a;
}

}  // namespace planact::testgen
