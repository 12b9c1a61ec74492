#include "join.hpp"

namespace planact::planner::detail {

Joiner::Joiner(const pddl::Domain& domain, const std::vector<pddl::TypedName>& objects,
               const pddl::FactSet& facts)
    : domain_(domain) {
  for (const pddl::TypedName& c : domain.constants) object_type_[c.name] = c.type;
  for (const pddl::TypedName& o : objects) object_type_[o.name] = o.type;
  for (const pddl::Fact& f : facts) by_predicate_[f.predicate].push_back(&f);
}

const std::vector<std::string>& Joiner::objects_for(const std::string& type) {
  auto it = objects_of_type_.find(type);
  if (it != objects_of_type_.end()) return it->second;
  std::vector<std::string> out;
  for (const auto& [name, t] : object_type_) {
    if (domain_.is_subtype(t, type)) out.push_back(name);
  }
  return objects_of_type_.emplace(type, std::move(out)).first->second;
}

bool Joiner::type_ok(const std::string& object, const std::string& type) const {
  auto it = object_type_.find(object);
  return it != object_type_.end() && domain_.is_subtype(it->second, type);
}

void Joiner::for_each(const std::vector<pddl::TypedName>& params, const std::vector<pddl::Atom>& atoms,
                      const std::function<void(const std::vector<std::string>&)>& emit) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < params.size(); ++i) index[params[i].name] = i;
  std::vector<std::string> binding(params.size());
  std::vector<bool> used(atoms.size(), false);

  std::function<void(std::size_t)> bind_free = [&](std::size_t i) {
    if (i == binding.size()) {
      emit(binding);
      return;
    }
    if (!binding[i].empty()) {
      if (type_ok(binding[i], params[i].type)) bind_free(i + 1);
      return;
    }
    for (const std::string& o : objects_for(params[i].type)) {
      binding[i] = o;
      bind_free(i + 1);
    }
    binding[i].clear();
  };

  std::function<void(std::size_t)> join = [&](std::size_t remaining) {
    if (remaining == 0) {
      bind_free(0);
      return;
    }
    std::size_t best = used.size();
    int best_bound = -1;
    for (std::size_t k = 0; k < used.size(); ++k) {
      if (used[k]) continue;
      int bound = 0;
      for (const std::string& t : atoms[k].args) {
        auto it = index.find(t);
        if (it == index.end() || !binding[it->second].empty()) ++bound;
      }
      if (bound > best_bound) {
        best_bound = bound;
        best = k;
      }
    }
    const pddl::Atom& atom = atoms[best];
    used[best] = true;
    auto facts = by_predicate_.find(atom.predicate);
    if (facts != by_predicate_.end()) {
      for (const pddl::Fact* f : facts->second) {
        if (f->args.size() != atom.args.size()) continue;
        std::vector<std::size_t> newly;
        bool ok = true;
        for (std::size_t a = 0; a < atom.args.size() && ok; ++a) {
          auto it = index.find(atom.args[a]);
          if (it == index.end()) {
            ok = atom.args[a] == f->args[a];
          } else if (binding[it->second].empty()) {
            binding[it->second] = f->args[a];
            newly.push_back(it->second);
          } else {
            ok = binding[it->second] == f->args[a];
          }
        }
        if (ok) join(remaining - 1);
        for (std::size_t n : newly) binding[n].clear();
      }
    }
    used[best] = false;
  };
  join(atoms.size());
}

}  // namespace planact::planner::detail
