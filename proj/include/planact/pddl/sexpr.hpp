#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace planact::pddl {

/// One node of an s-expression tree with its source position.
struct SExpr {
  bool is_list = false;
  std::string atom;  // lower-cased identifier when !is_list
  std::vector<SExpr> items;
  std::size_t line = 1;
  std::size_t col = 1;
  /// Text of "; @description" comment lines directly preceding a list.
  std::string annotation;

  bool is_atom() const { return !is_list; }
  bool is_atom(std::string_view s) const { return !is_list && atom == s; }
  /// True for a list whose first item is the atom `head`.
  bool has_head(std::string_view head) const {
    return is_list && !items.empty() && items.front().is_atom(head);
  }
};

/// Parses exactly one top-level s-expression. Identifiers are normalized to
/// lower case. Trailing non-comment input is a SyntaxError.
SExpr parse_sexpr(std::string_view text);

/// Parses a sequence of top-level s-expressions (possibly empty).
std::vector<SExpr> parse_sexpr_sequence(std::string_view text);

}  // namespace planact::pddl
