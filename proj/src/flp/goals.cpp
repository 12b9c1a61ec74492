#include "planact/flp/goals.hpp"

#include <algorithm>

#include "planact/common/error.hpp"
#include "planact/pddl/sexpr.hpp"

namespace planact::flp {

namespace {

const std::string kFence = "```";

pddl::Literal to_literal(const pddl::SExpr& e, const pddl::Domain& domain, const pddl::Problem& problem) {
  if (!e.is_list || e.items.empty() || e.items.front().is_list) {
    throw SyntaxError(e.line, e.col, "a goal literal (predicate arg ...)");
  }
  if (e.has_head("not")) throw UnknownPredicate("negative goal literals are not supported");
  const std::string& name = e.items.front().atom;
  const pddl::Predicate* p = domain.find_predicate(name);
  if (p == nullptr) throw UnknownPredicate(name);
  if (!domain.is_logical(name)) throw UnknownPredicate(name + " is not a logical state predicate");
  if (e.items.size() - 1 != p->arity()) {
    throw UnknownPredicate(name + " takes " + std::to_string(p->arity()) + " arguments, got " +
                           std::to_string(e.items.size() - 1));
  }
  pddl::Literal l{{name, {}}, true};
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    const pddl::SExpr& a = e.items[i];
    if (a.is_list) throw SyntaxError(a.line, a.col, "an object name");
    const std::optional<std::string> type = problem.object_type(a.atom);
    if (!type) throw UnknownObject(a.atom);
    if (!domain.is_subtype(*type, p->params[i - 1].type)) {
      throw UnknownObject(a.atom + " is not a " + p->params[i - 1].type);
    }
    l.atom.args.push_back(a.atom);
  }
  return l;
}

}  // namespace

std::optional<std::string> last_fenced_block(const std::string& text) {
  std::vector<std::size_t> fences;
  for (std::size_t at = text.find(kFence); at != std::string::npos; at = text.find(kFence, at + kFence.size())) {
    fences.push_back(at);
  }
  if (fences.size() < 2) return std::nullopt;
  const std::size_t pairs = fences.size() / 2;
  const std::size_t open = fences[2 * (pairs - 1)] + kFence.size();
  const std::size_t close = fences[2 * (pairs - 1) + 1];
  std::string body = text.substr(open, close - open);
  // Drop an info string such as "pddl" on the opening line.
  if (const std::size_t nl = body.find('\n'); nl != std::string::npos && body.find('(') > nl) body.erase(0, nl + 1);
  return body;
}

GoalSet extract_goals(const std::string& answer, const pddl::Domain& domain, const pddl::Problem& problem) {
  const std::optional<std::string> block = last_fenced_block(answer);
  if (!block) throw NoBlockFound("no fenced block in answer");
  const std::vector<pddl::SExpr> forms = pddl::parse_sexpr_sequence(*block);
  const auto goal = std::find_if(forms.rbegin(), forms.rend(), [](const pddl::SExpr& e) { return e.has_head(":goal"); });
  if (goal == forms.rend()) throw NoBlockFound("fenced block has no (:goal ...) form");
  if (goal->items.size() != 2) throw SyntaxError(goal->line, goal->col, "(:goal <formula>)");

  const pddl::SExpr& body = goal->items[1];
  std::vector<const pddl::SExpr*> parts;
  if (body.has_head("and")) {
    for (std::size_t i = 1; i < body.items.size(); ++i) parts.push_back(&body.items[i]);
  } else {
    parts.push_back(&body);
  }
  GoalSet g;
  for (const pddl::SExpr* e : parts) g.literals.push_back(to_literal(*e, domain, problem));
  if (g.literals.empty()) throw EmptyGoal("goal has no literals");
  std::sort(g.literals.begin(), g.literals.end());
  g.literals.erase(std::unique(g.literals.begin(), g.literals.end()), g.literals.end());
  return g;
}

}  // namespace planact::flp
