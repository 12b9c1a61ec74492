#include "planact/pddl/parser.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "planact/common/error.hpp"
#include "planact/pddl/sexpr.hpp"

namespace planact::pddl {

namespace {

[[noreturn]] void fail(const SExpr& at, const std::string& expected) {
  throw SyntaxError(at.line, at.col, expected);
}

const SExpr& expect_list(const SExpr& node, const std::string& what) {
  if (!node.is_list) fail(node, what);
  return node;
}

const std::string& expect_atom(const SExpr& node, const std::string& what) {
  if (!node.is_atom() || node.atom.empty()) fail(node, what);
  return node.atom;
}

bool is_identifier(const std::string& s) {
  return !s.empty() && s.front() != '?' && s.front() != ':' && s != "-";
}

/// `?a ?b - type ?c` style list. Names without a type get `default_type`.
std::vector<TypedName> parse_typed_list(const std::vector<SExpr>& items, std::size_t begin,
                                        bool variables, const std::string& default_type) {
  std::vector<TypedName> out;
  std::size_t pending_start = 0;
  for (std::size_t i = begin; i < items.size(); ++i) {
    const SExpr& item = items[i];
    const std::string& name = expect_atom(item, variables ? "variable" : "identifier");
    if (name == "-") {
      if (i + 1 >= items.size()) fail(item, "type name after '-'");
      const std::string& type = expect_atom(items[i + 1], "type name");
      if (!is_identifier(type)) fail(items[i + 1], "type name");
      for (std::size_t k = pending_start; k < out.size(); ++k) out[k].type = type;
      pending_start = out.size();
      ++i;
      continue;
    }
    if (variables ? name.front() != '?' || name.size() < 2 : !is_identifier(name)) {
      fail(item, variables ? "variable" : "identifier");
    }
    out.push_back({name, default_type});
  }
  return out;
}

/// Flattens `(and l1 l2 ...)`, a single literal, or `()` into literals.
void parse_formula(const SExpr& node, std::vector<Literal>& out) {
  expect_list(node, "formula");
  if (node.items.empty()) return;
  if (node.has_head("and")) {
    for (std::size_t i = 1; i < node.items.size(); ++i) parse_formula(node.items[i], out);
    return;
  }
  if (node.has_head("not")) {
    if (node.items.size() != 2) fail(node, "(not <atom>)");
    const SExpr& inner = expect_list(node.items[1], "atom");
    if (inner.has_head("not") || inner.has_head("and")) fail(inner, "atom");
    std::vector<Literal> tmp;
    parse_formula(inner, tmp);
    if (tmp.size() != 1) fail(inner, "atom");
    tmp.front().positive = false;
    out.push_back(tmp.front());
    return;
  }
  const SExpr& head = node.items.front();
  const std::string& pred = expect_atom(head, "predicate name");
  if (!is_identifier(pred) || pred == "or" || pred == "forall" || pred == "exists" ||
      pred == "when" || pred == "imply" || pred == "=") {
    fail(head, "predicate name");
  }
  Literal lit;
  lit.atom.predicate = pred;
  for (std::size_t i = 1; i < node.items.size(); ++i) {
    const std::string& term = expect_atom(node.items[i], "term");
    if (term == "-" || term.front() == ':') fail(node.items[i], "term");
    lit.atom.args.push_back(term);
  }
  out.push_back(std::move(lit));
}

/// Section keyword lists of the form (:keyword ...).
const SExpr* find_key(const SExpr& node, std::size_t begin, std::string_view key) {
  for (std::size_t i = begin; i + 1 < node.items.size(); i += 2) {
    if (node.items[i].is_atom(key)) return &node.items[i + 1];
  }
  return nullptr;
}

void check_keys(const SExpr& node, std::size_t begin, const std::set<std::string>& allowed) {
  for (std::size_t i = begin; i < node.items.size(); i += 2) {
    const SExpr& key = node.items[i];
    if (!key.is_atom() || !allowed.count(key.atom)) {
      std::string list;
      for (const auto& k : allowed) list += (list.empty() ? "" : " | ") + k;
      fail(key, list);
    }
    if (i + 1 >= node.items.size()) fail(key, "value after " + key.atom);
  }
}

std::string header_name(const SExpr& root, std::string_view kind) {
  if (!root.has_head("define")) fail(root, "(define ...)");
  if (root.items.size() < 2) fail(root, "(" + std::string(kind) + " <name>)");
  const SExpr& header = root.items[1];
  if (!header.has_head(kind) || header.items.size() != 2) {
    fail(header, "(" + std::string(kind) + " <name>)");
  }
  return expect_atom(header.items[1], std::string(kind) + " name");
}

void check_atom_against(const Domain& domain, const Atom& atom, const SExpr& at) {
  const Predicate* p = domain.find_predicate(atom.predicate);
  if (p == nullptr) throw UnknownPredicate(atom.predicate + " (line " + std::to_string(at.line) + ")");
  if (p->arity() != atom.args.size()) {
    throw ArityMismatch(atom.predicate + " expects " + std::to_string(p->arity()) + " arguments, got " +
                        std::to_string(atom.args.size()));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Domain

Domain parse_domain(std::string_view text) {
  const SExpr root = parse_sexpr(text);
  Domain domain;
  domain.name = header_name(root, "domain");

  std::set<std::string> type_names{"object"};
  std::vector<std::pair<ActionSchema, std::vector<std::pair<Literal, bool>>>> raw_actions;
  std::vector<const SExpr*> action_nodes;

  auto declare_type_ok = [&](const std::string& t, const SExpr& at) {
    if (!type_names.count(t)) throw UnknownType(t + " (line " + std::to_string(at.line) + ")");
  };

  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const SExpr& section = expect_list(root.items[i], "domain section");
    if (section.items.empty()) fail(section, "domain section");
    const std::string& key = expect_atom(section.items.front(), "domain section keyword");
    if (key == ":requirements") {
      for (std::size_t k = 1; k < section.items.size(); ++k) {
        domain.requirements.push_back(expect_atom(section.items[k], "requirement"));
      }
    } else if (key == ":types") {
      for (const TypedName& t : parse_typed_list(section.items, 1, false, "object")) {
        if (t.name == "object") continue;
        if (type_names.count(t.name)) throw DuplicateName("type " + t.name);
        type_names.insert(t.name);
        domain.types.push_back({t.name, t.type});
      }
      for (const TypeDecl& t : domain.types) {
        if (!type_names.count(t.parent)) throw UnknownType(t.parent);
      }
    } else if (key == ":constants") {
      for (TypedName& c : parse_typed_list(section.items, 1, false, "object")) {
        declare_type_ok(c.type, section);
        for (const TypedName& existing : domain.constants) {
          if (existing.name == c.name) throw DuplicateName("constant " + c.name);
        }
        domain.constants.push_back(std::move(c));
      }
    } else if (key == ":predicates") {
      for (std::size_t k = 1; k < section.items.size(); ++k) {
        const SExpr& decl = expect_list(section.items[k], "predicate declaration");
        if (decl.items.empty()) fail(decl, "predicate name");
        Predicate p;
        p.name = expect_atom(decl.items.front(), "predicate name");
        if (!is_identifier(p.name)) fail(decl.items.front(), "predicate name");
        p.params = parse_typed_list(decl.items, 1, true, "object");
        for (const TypedName& param : p.params) declare_type_ok(param.type, decl);
        if (domain.find_predicate(p.name) != nullptr) throw DuplicateName("predicate " + p.name);
        domain.predicates.push_back(std::move(p));
      }
    } else if (key == ":action") {
      action_nodes.push_back(&section);
    } else {
      fail(section.items.front(), ":requirements | :types | :constants | :predicates | :action");
    }
  }

  std::set<std::string> fluent;
  for (const SExpr* node : action_nodes) {
    const SExpr& section = *node;
    if (section.items.size() < 2) fail(section, "action name");
    ActionSchema schema;
    schema.name = expect_atom(section.items[1], "action name");
    if (!is_identifier(schema.name)) fail(section.items[1], "action name");
    schema.description = section.annotation;
    if (domain.find_action(schema.name) != nullptr) throw DuplicateName("action " + schema.name);
    check_keys(section, 2, {":parameters", ":precondition", ":effect"});
    if (const SExpr* params = find_key(section, 2, ":parameters")) {
      expect_list(*params, "parameter list");
      schema.params = parse_typed_list(params->items, 0, true, "object");
    }
    std::set<std::string> seen;
    for (const TypedName& p : schema.params) {
      declare_type_ok(p.type, section);
      if (!seen.insert(p.name).second) throw DuplicateName("parameter " + p.name + " in " + schema.name);
    }
    std::vector<Literal> pre;
    std::vector<Literal> eff;
    if (const SExpr* f = find_key(section, 2, ":precondition")) parse_formula(*f, pre);
    if (const SExpr* f = find_key(section, 2, ":effect")) parse_formula(*f, eff);

    auto check_terms = [&](const Literal& lit) {
      check_atom_against(domain, lit.atom, section);
      for (const std::string& term : lit.atom.args) {
        if (is_variable(term)) {
          if (!seen.count(term)) throw UnknownVariable(term + " in action " + schema.name);
        } else if (std::none_of(domain.constants.begin(), domain.constants.end(),
                                [&](const TypedName& c) { return c.name == term; })) {
          throw UnknownObject(term + " in action " + schema.name);
        }
      }
    };
    std::vector<std::pair<Literal, bool>> tagged;
    for (const Literal& lit : pre) {
      check_terms(lit);
      tagged.push_back({lit, true});
    }
    for (const Literal& lit : eff) {
      check_terms(lit);
      fluent.insert(lit.atom.predicate);
      (lit.positive ? schema.eff_plus : schema.eff_minus).push_back(lit.atom);
    }
    raw_actions.push_back({std::move(schema), std::move(tagged)});
  }

  for (Predicate& p : domain.predicates) {
    if (fluent.count(p.name)) {
      p.kind = LiteralKind::Fluent;
    } else if (p.arity() == 1 && type_names.count(p.name) && p.name != "object") {
      p.kind = LiteralKind::UnaryType;
    } else {
      p.kind = LiteralKind::Static;
    }
  }
  for (Predicate& p : domain.predicates) {
    p.tags.clear();
    for (const TypedName& param : p.params) p.tags.push_back(domain.tag_of_type(param.type));
  }

  for (auto& [schema, pre] : raw_actions) {
    for (const auto& [lit, unused] : pre) {
      if (fluent.count(lit.atom.predicate)) {
        (lit.positive ? schema.pre_plus : schema.pre_minus).push_back(lit.atom);
      } else if (lit.positive) {
        schema.static_pre.push_back(lit.atom);
      } else {
        throw KindConflict("negative static precondition " + to_string(lit) + " in " + schema.name);
      }
    }
    domain.actions.push_back(std::move(schema));
  }

  for (const Predicate& p : domain.predicates) {
    if (p.kind != LiteralKind::Fluent) continue;
    if (std::none_of(p.tags.begin(), p.tags.end(), is_geometric)) domain.logical_predicates.push_back(p.name);
  }
  return domain;
}

// ---------------------------------------------------------------------------
// Problem

Problem parse_problem(std::string_view text, const Domain& domain) {
  const SExpr root = parse_sexpr(text);
  Problem problem;
  problem.name = header_name(root, "problem");

  std::set<std::string> names;
  for (const TypedName& c : domain.constants) names.insert(c.name);

  const SExpr* goal_node = nullptr;
  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const SExpr& section = expect_list(root.items[i], "problem section");
    if (section.items.empty()) fail(section, "problem section");
    const std::string& key = expect_atom(section.items.front(), "problem section keyword");
    if (key == ":domain") {
      if (section.items.size() != 2) fail(section, "(:domain <name>)");
      problem.domain_name = expect_atom(section.items[1], "domain name");
      if (problem.domain_name != domain.name) fail(section.items[1], "domain " + domain.name);
    } else if (key == ":objects") {
      for (TypedName& o : parse_typed_list(section.items, 1, false, "object")) {
        if (o.type != "object" && std::none_of(domain.types.begin(), domain.types.end(),
                                                [&](const TypeDecl& t) { return t.name == o.type; })) {
          throw UnknownType(o.type);
        }
        if (!names.insert(o.name).second) throw DuplicateName("object " + o.name);
        problem.objects.push_back(std::move(o));
      }
    } else if (key == ":init") {
      for (std::size_t k = 1; k < section.items.size(); ++k) {
        std::vector<Literal> lits;
        const SExpr& fact = expect_list(section.items[k], "ground atom");
        if (fact.has_head("not") || fact.has_head("and")) fail(fact, "ground atom");
        parse_formula(fact, lits);
        if (lits.size() != 1) fail(fact, "ground atom");
        problem.init.insert(lits.front().atom);
      }
    } else if (key == ":goal") {
      if (section.items.size() != 2) fail(section, "(:goal <formula>)");
      goal_node = &section.items[1];
    } else {
      fail(section.items.front(), ":domain | :objects | :init | :goal");
    }
  }
  if (goal_node != nullptr) parse_formula(*goal_node, problem.goal);

  auto resolve = [&](const Atom& atom) {
    check_atom_against(domain, atom, root);
    for (const std::string& arg : atom.args) {
      if (is_variable(arg)) throw SyntaxError(root.line, root.col, "ground term, got " + arg);
      if (!names.count(arg)) throw UnknownObject(arg + " in " + to_string(atom));
    }
  };
  for (const Fact& f : problem.init) resolve(f);
  for (const Literal& l : problem.goal) resolve(l.atom);
  return problem;
}

std::vector<Literal> parse_conjunction(std::string_view text) {
  std::vector<Literal> out;
  parse_formula(parse_sexpr(text), out);
  return out;
}

// ---------------------------------------------------------------------------
// Streams

std::vector<StreamSpec> parse_streams(std::string_view text, const Domain& domain) {
  const SExpr root = parse_sexpr(text);
  header_name(root, "stream");
  std::vector<StreamSpec> specs;
  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const SExpr& node = expect_list(root.items[i], "(:stream ...)");
    if (!node.has_head(":stream") || node.items.size() < 2) fail(node, "(:stream <name> ...)");
    StreamSpec spec;
    spec.name = expect_atom(node.items[1], "stream name");
    for (const StreamSpec& s : specs) {
      if (s.name == spec.name) throw DuplicateName("stream " + spec.name);
    }
    check_keys(node, 2, {":inputs", ":domain", ":outputs", ":certified"});
    if (const SExpr* in = find_key(node, 2, ":inputs")) {
      spec.inputs = parse_typed_list(expect_list(*in, "input list").items, 0, true, "");
    }
    if (const SExpr* out = find_key(node, 2, ":outputs")) {
      spec.outputs = parse_typed_list(expect_list(*out, "output list").items, 0, true, "");
    }
    std::vector<Literal> dom;
    std::vector<Literal> cert;
    if (const SExpr* f = find_key(node, 2, ":domain")) parse_formula(*f, dom);
    if (const SExpr* f = find_key(node, 2, ":certified")) parse_formula(*f, cert);

    std::set<std::string> inputs;
    std::set<std::string> outputs;
    for (const TypedName& v : spec.inputs) {
      if (!inputs.insert(v.name).second) throw DuplicateName("input " + v.name + " in " + spec.name);
    }
    for (const TypedName& v : spec.outputs) {
      if (inputs.count(v.name)) throw DuplicateName("output " + v.name + " is also an input of " + spec.name);
      if (!outputs.insert(v.name).second) throw DuplicateName("output " + v.name + " in " + spec.name);
    }

    auto check_static = [&](const Literal& lit) {
      check_atom_against(domain, lit.atom, node);
      if (!lit.positive) fail(node, "positive literal in stream " + spec.name);
      if (domain.find_predicate(lit.atom.predicate)->kind == LiteralKind::Fluent) {
        throw KindConflict(lit.atom.predicate + " is fluent but used by stream " + spec.name);
      }
    };
    for (const Literal& lit : dom) {
      check_static(lit);
      for (const std::string& arg : lit.atom.args) {
        if (outputs.count(arg)) throw OutputMentionedInDomain(arg + " in " + spec.name);
        if (!inputs.count(arg)) throw UnknownVariable(arg + " in domain of " + spec.name);
      }
      spec.domain_literals.push_back(lit.atom);
    }
    std::set<std::string> used_outputs;
    for (const Literal& lit : cert) {
      check_static(lit);
      bool mentions_output = false;
      for (const std::string& arg : lit.atom.args) {
        if (outputs.count(arg)) {
          mentions_output = true;
          used_outputs.insert(arg);
        } else if (!inputs.count(arg)) {
          throw UnknownVariable(arg + " in certified of " + spec.name);
        }
      }
      if (!mentions_output) {
        throw OutputUnused("certified " + to_string(lit.atom) + " of " + spec.name + " mentions no output");
      }
      spec.certified.push_back(lit.atom);
    }
    for (const TypedName& v : spec.outputs) {
      if (!used_outputs.count(v.name)) throw OutputUnused(v.name + " of " + spec.name);
    }

    // Untyped variables take the type of the first predicate slot they fill.
    auto infer = [&](TypedName& v) {
      if (!v.type.empty()) return;
      for (const auto* list : {&spec.domain_literals, &spec.certified}) {
        for (const Atom& a : *list) {
          for (std::size_t k = 0; k < a.args.size(); ++k) {
            if (a.args[k] == v.name) {
              v.type = domain.find_predicate(a.predicate)->params[k].type;
              return;
            }
          }
        }
      }
      v.type = "object";
    };
    for (TypedName& v : spec.inputs) infer(v);
    for (TypedName& v : spec.outputs) infer(v);
    specs.push_back(std::move(spec));
  }
  return specs;
}

}  // namespace planact::pddl
