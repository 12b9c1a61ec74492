#include "planact/pddl/printer.hpp"

#include <sstream>

namespace planact::pddl {

namespace {

std::string typed_list(const std::vector<TypedName>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += ' ';
    out += names[i].name + " - " + names[i].type;
  }
  return out;
}

void write_conjunction(std::ostream& os, const std::vector<Atom>& pos, const std::vector<Atom>& statics,
                       const std::vector<Atom>& neg, const std::string& indent) {
  os << "(and";
  for (const Atom& a : pos) os << "\n" << indent << "  " << to_string(a);
  for (const Atom& a : statics) os << "\n" << indent << "  " << to_string(a);
  for (const Atom& a : neg) os << "\n" << indent << "  (not " << to_string(a) << ")";
  os << ")";
}

}  // namespace

std::string print_conjunction(const std::vector<Literal>& literals) {
  std::string out = "(and";
  for (const Literal& l : literals) out += " " + to_string(l);
  return out + ")";
}

std::string print_domain(const Domain& d) {
  std::ostringstream os;
  os << "(define (domain " << d.name << ")\n";
  if (!d.requirements.empty()) {
    os << "  (:requirements";
    for (const std::string& r : d.requirements) os << ' ' << r;
    os << ")\n";
  }
  if (!d.types.empty()) {
    os << "  (:types";
    for (const TypeDecl& t : d.types) os << ' ' << t.name << " - " << t.parent;
    os << ")\n";
  }
  if (!d.constants.empty()) os << "  (:constants " << typed_list(d.constants) << ")\n";
  os << "  (:predicates";
  for (const Predicate& p : d.predicates) {
    os << "\n    (" << p.name;
    if (!p.params.empty()) os << ' ' << typed_list(p.params);
    os << ")";
  }
  os << ")\n";
  for (const ActionSchema& a : d.actions) {
    if (!a.description.empty()) os << "  ; @description " << a.description << "\n";
    os << "  (:action " << a.name << "\n";
    os << "    :parameters (" << typed_list(a.params) << ")\n";
    os << "    :precondition ";
    write_conjunction(os, a.pre_plus, a.static_pre, a.pre_minus, "    ");
    os << "\n    :effect ";
    write_conjunction(os, a.eff_plus, {}, a.eff_minus, "    ");
    os << ")\n";
  }
  os << ")\n";
  return os.str();
}

std::string print_problem(const Problem& p) {
  std::ostringstream os;
  os << "(define (problem " << p.name << ")\n";
  if (!p.domain_name.empty()) os << "  (:domain " << p.domain_name << ")\n";
  os << "  (:objects";
  for (const TypedName& o : p.objects) os << "\n    " << o.name << " - " << o.type;
  os << ")\n  (:init";
  for (const Fact& f : p.init) os << "\n    " << to_string(f);
  os << ")\n  (:goal (and";
  for (const Literal& l : p.goal) os << "\n    " << to_string(l);
  os << ")))\n";
  return os.str();
}

std::string print_streams(const std::string& name, const std::vector<StreamSpec>& streams) {
  std::ostringstream os;
  os << "(define (stream " << name << ")";
  for (const StreamSpec& s : streams) {
    os << "\n  (:stream " << s.name << "\n";
    os << "    :inputs (" << typed_list(s.inputs) << ")\n";
    os << "    :domain ";
    write_conjunction(os, s.domain_literals, {}, {}, "    ");
    os << "\n    :outputs (" << typed_list(s.outputs) << ")\n";
    os << "    :certified ";
    write_conjunction(os, s.certified, {}, {}, "    ");
    os << ")";
  }
  os << ")\n";
  return os.str();
}

}  // namespace planact::pddl
