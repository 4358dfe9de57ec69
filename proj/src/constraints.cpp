#include "jumpcop/constraints.hpp"

#include <algorithm>

namespace jumpcop {

std::string show_atom(const Context& ctx, Atom a) {
  switch (a.kind()) {
    case AtomKind::Place:
      return ctx.show_lit(a.a()) + "@" + ctx.positions.to_string(a.b());
    case AtomKind::Bind:
      return ctx.show_var(a.a()) + "->" + ctx.show_term(a.b());
    case AtomKind::NoConnect:
      return ctx.positions.to_string(a.a()) + "~/~" + ctx.positions.to_string(a.b());
    case AtomKind::Diseq:
      return ctx.positions.to_string(a.a()) + "!=" + ctx.positions.to_string(a.b());
  }
  return "?";
}

void Trail::commit(Frame frame) {
  for (Atom a : frame.atoms) {
    bool inserted = membership_.insert(a).second;
    assert(inserted);
    (void)inserted;
  }
  frames_.push_back(std::move(frame));
}

Frame Trail::pop() {
  assert(!frames_.empty());
  Frame f = std::move(frames_.back());
  frames_.pop_back();
  for (Atom a : f.atoms) membership_.erase(a);
  return f;
}

std::vector<Atom> Trail::membership_snapshot() const {
  std::vector<Atom> out(membership_.begin(), membership_.end());
  std::sort(out.begin(), out.end());
  return out;
}

bool is_violated_naive(const Trail& trail, std::span<const Atom> atoms) {
  for (Atom a : atoms)
    if (!trail.contains(a)) return false;
  return true;
}

namespace {

bool in_tentative(std::span<const Atom> tentative, Atom a) {
  return std::find(tentative.begin(), tentative.end(), a) != tentative.end();
}

}  // namespace

void ConstraintStore::check_conflicts(const Trail& trail, std::span<const Atom> tentative,
                                      std::vector<uint32_t>& out) {
  out.clear();
  for (Atom t : tentative) {
    auto it = watchers_.find(t);
    if (it == watchers_.end()) continue;
    std::vector<uint32_t>& list = it->second;
    for (size_t i = 0; i < list.size();) {
      uint32_t cid = list[i];
      Constraint& c = constraints_[cid];
      assert(c.atoms[c.watch] == t);
      uint32_t replacement = c.watch;
      for (uint32_t k = 0; k < c.atoms.size(); ++k) {
        Atom cand = c.atoms[k];
        if (cand == t) continue;
        if (!trail.contains(cand) && !in_tentative(tentative, cand)) {
          replacement = k;
          break;
        }
      }
      if (replacement != c.watch) {
        c.watch = replacement;
        watchers_[c.atoms[replacement]].push_back(cid);
        list[i] = list.back();
        list.pop_back();
      } else {
        out.push_back(cid);
        ++i;
      }
    }
  }
}

uint32_t ConstraintStore::add(std::vector<Atom> atoms, const Trail& trail) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  uint32_t id = static_cast<uint32_t>(constraints_.size());
  Constraint c{std::move(atoms), 0};
  if (c.atoms.empty()) {
    exhausted_ = true;
    constraints_.push_back(std::move(c));
    return id;
  }
  uint32_t watch = static_cast<uint32_t>(c.atoms.size());
  for (uint32_t k = 0; k < c.atoms.size(); ++k) {
    if (!trail.contains(c.atoms[k])) {
      watch = k;
      break;
    }
  }
  assert(watch < c.atoms.size() && "constraint violated by the current trail");
  c.watch = watch;
  watchers_[c.atoms[watch]].push_back(id);
  constraints_.push_back(std::move(c));
  return id;
}

uint32_t ConstraintStore::select_conflict(std::span<const uint32_t> conflicts,
                                          std::span<const Atom> tentative,
                                          const std::unordered_set<Atom, AtomHash>& learn_so_far) const {
  assert(!conflicts.empty());
  uint32_t best = conflicts[0];
  size_t best_cost = SIZE_MAX;
  for (uint32_t cid : conflicts) {
    size_t cost = 0;
    for (Atom a : constraints_[cid].atoms)
      if (!in_tentative(tentative, a) && !learn_so_far.count(a)) ++cost;
    if (cost < best_cost || (cost == best_cost && cid < best)) {
      best = cid;
      best_cost = cost;
    }
  }
  return best;
}

bool ConstraintStore::is_violated_naive(uint32_t id, const Trail& trail) const {
  return jumpcop::is_violated_naive(trail, constraints_[id].atoms);
}

}  // namespace jumpcop
