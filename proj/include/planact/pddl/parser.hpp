#pragma once

#include <string_view>
#include <vector>

#include "planact/pddl/types.hpp"

namespace planact::pddl {

/// Parses a typed-STRIPS domain with negative preconditions. Predicates are
/// classified after parsing: fluent if they occur in any effect, unary-type
/// if static, unary and named after a declared type, static otherwise.
Domain parse_domain(std::string_view text);

/// Parses a problem and resolves init/goal atoms against `domain`.
Problem parse_problem(std::string_view text, const Domain& domain);

/// Parses `(and l1 ...)`, a single literal or `()` without checking the
/// predicates against a domain.
std::vector<Literal> parse_conjunction(std::string_view text);

/// Parses a stream file and checks every spec against `domain`'s static
/// predicates.
std::vector<StreamSpec> parse_streams(std::string_view text, const Domain& domain);

}  // namespace planact::pddl
