#pragma once

#include <string>
#include <vector>

#include "planact/pddl/types.hpp"

namespace planact::pddl {

/// Canonical text renderings. Re-parsing the output yields an AST equal to
/// the input.
std::string print_domain(const Domain& domain);
std::string print_problem(const Problem& problem);
std::string print_streams(const std::string& name, const std::vector<StreamSpec>& streams);

/// `(and l1 l2 ...)` (or `(and)` when empty).
std::string print_conjunction(const std::vector<Literal>& literals);

}  // namespace planact::pddl
