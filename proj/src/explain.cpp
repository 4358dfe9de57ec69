#include "jumpcop/explain.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>

namespace jumpcop {

namespace {

[[noreturn]] void fatal(const char* msg) {
  std::fprintf(stderr, "jumpcop: %s\n", msg);
  std::abort();
}

}  // namespace

std::vector<std::pair<VarNum, TermId>> Explainer::minimal_blocking_bindings(
    LitId l1, LitId l2, const Bindings& sigma) {
  const TermTable& tt = ctx_.terms;
  if (tt.lit_positive(l1) == tt.lit_positive(l2) || tt.lit_pred(l1) != tt.lit_pred(l2))
    fatal("minimal_blocking_bindings: literals cannot connect at all");

  tau_.clear();
  if (unify_tuples(tt, tau_, tt.lit_args(l1), tt.lit_args(l2)) != UnifyError::None)
    fatal("minimal_blocking_bindings: literals do not unify under the empty substitution");

  std::vector<std::pair<VarNum, TermId>> retained;
  size_t checkpoint = tau_.mark();
  auto order = sigma.order();
  size_t i = 0;
  while (true) {
    if (i >= order.size())
      fatal("minimal_blocking_bindings: literals unify under sigma");
    VarNum x = order[i];
    TermId xt = tt.var_term(x);
    TermId t = sigma.value(x);
    if (unify_terms(tt, tau_, xt, t) == UnifyError::None) {
      ++i;
      continue;
    }
    // drop the scratch bindings accumulated since the checkpoint and retry
    tau_.undo_to(checkpoint);
    if (unify_terms(tt, tau_, xt, t) == UnifyError::None) {
      retained.push_back({x, t});
      checkpoint = tau_.mark();
      i = 0;  // rescan sigma against the grown base
      continue;
    }
    retained.push_back({x, t});
    break;
  }
  tau_.clear();
  return retained;
}

std::vector<std::pair<VarNum, TermId>> Explainer::minimal_falsifying_bindings(
    std::span<const TermId> lhs, std::span<const TermId> rhs, const Bindings& sigma,
    std::span<const TermId> other_args, std::span<const TermId> goal_args) {
  const TermTable& tt = ctx_.terms;
  std::vector<std::pair<VarNum, TermId>> kept;
  for (VarNum v : sigma.order()) kept.push_back({v, sigma.value(v)});

  auto falsified_with = [&](const std::vector<std::pair<VarNum, TermId>>& subset) {
    tau_.clear();
    for (auto [v, t] : subset) tau_.bind(v, t);
    // the connection unified under full sigma, so it unifies under subsets
    if (unify_tuples(tt, tau_, other_args, goal_args) != UnifyError::None)
      fatal("minimal_falsifying_bindings: connection fails under a sigma subset");
    bool eq = equal_under(tt, tau_, lhs, rhs);
    tau_.clear();
    return eq;
  };

  if (!falsified_with(kept))
    fatal("minimal_falsifying_bindings: disequation is not falsified under sigma");

  // deletion filter, oldest binding first; equality under the re-derived
  // most general delta persists into every extension, so the survivors are
  // irredundant and the result transfers to other tableaux
  for (size_t i = 0; i < kept.size();) {
    std::vector<std::pair<VarNum, TermId>> without = kept;
    without.erase(without.begin() + i);
    if (falsified_with(without)) {
      kept = std::move(without);
    } else {
      ++i;
    }
  }
  return kept;
}

Reason Explainer::explain_failed_inference(Tableau& tableau, const Inference& j,
                                           const CalculusFailure& failure) {
  Reason reason;
  switch (failure.kind) {
    case CalculusFailure::Kind::DepthBlocked:
      // positions fix the depth; nothing beyond the goal's own place atom
      break;
    case CalculusFailure::Kind::ConnectionBlocked: {
      for (auto [v, t] :
           minimal_blocking_bindings(failure.goal_lit, failure.other_lit, tableau.bindings()))
        reason.push_back(bind_atom(v, t));
      if (j.rule == Inference::Rule::Reduce)
        reason.push_back(place_atom(failure.other_lit, failure.other_pos));
      break;
    }
    case CalculusFailure::Kind::RegularityBlocked: {
      const TermTable& tt = tableau.ctx().terms;
      if (failure.diseq_active) {
        reason.push_back(diseq_atom(failure.diseq.anc, failure.diseq.desc));
        // a disequation atom is keyed by its positions only, so pin the
        // literals whose argument tuples the analysis is about
        reason.push_back(place_atom(failure.diseq_anc_lit, failure.diseq.anc));
        reason.push_back(place_atom(failure.diseq_desc_lit, failure.diseq.desc));
      } else {
        // the disequation never reached the trail: the inference would have
        // created it, so the grounded cause is the ancestor's placement
        reason.push_back(place_atom(failure.diseq_anc_lit, failure.diseq.anc));
      }
      auto lhs = tt.lit_args(failure.diseq_desc_lit);
      auto rhs = tt.lit_args(failure.diseq_anc_lit);
      for (auto [v, t] : minimal_falsifying_bindings(lhs, rhs, tableau.bindings(),
                                                     tt.lit_args(failure.other_lit),
                                                     tt.lit_args(failure.goal_lit)))
        reason.push_back(bind_atom(v, t));
      break;
    }
  }
  return reason;
}

Reason Explainer::ground_conflict(Tableau& tableau, const ApplyRecord& record,
                                  std::span<const Atom> constraint_atoms) {
  const TermTable& tt = tableau.ctx().terms;
  const Inference& j = record.inference;
  Reason reason;
  std::vector<std::pair<VarNum, TermId>> required_binds;

  for (Atom a : constraint_atoms) {
    bool tentative = std::find(record.atoms.begin(), record.atoms.end(), a) != record.atoms.end();
    if (!tentative) {
      reason.push_back(a);
      continue;
    }
    switch (a.kind()) {
      case AtomKind::Place:
        // fixed by the goal position and the clause instance
        break;
      case AtomKind::NoConnect:
      case AtomKind::Diseq:
        // depends on what sits at the ancestor position
        reason.push_back(place_atom(tableau.node(a.a()).literal, a.a()));
        break;
      case AtomKind::Bind:
        required_binds.push_back({a.a(), a.b()});
        break;
    }
  }

  if (!required_binds.empty()) {
    // which sigma entries force the connection delta to reproduce exactly
    // these bindings; the record is still applied, so sigma proper is
    // everything below the delta mark
    assert(j.rule != Inference::Rule::Start);
    LitId glit = tableau.node(j.goal).literal;
    LitId olit = j.rule == Inference::Rule::Reduce
                     ? tableau.node(j.ancestor).literal
                     : tableau.instance(j.clause, j.goal)[j.lit_index - 1];
    auto goal_args = tt.lit_args(glit);
    auto other_args = tt.lit_args(olit);
    const Bindings& full = tableau.bindings();
    std::vector<std::pair<VarNum, TermId>> kept;
    for (VarNum v : full.order().subspan(0, record.delta_mark))
      kept.push_back({v, full.value(v)});

    auto reproduces = [&](const std::vector<std::pair<VarNum, TermId>>& subset) {
      tau_.clear();
      for (auto [v, t] : subset) tau_.bind(v, t);
      if (unify_tuples(tt, tau_, other_args, goal_args) != UnifyError::None) {
        tau_.clear();
        return false;
      }
      bool ok = true;
      for (auto [v, t] : required_binds)
        if (!tau_.is_bound(v) || tau_.value(v) != t) ok = false;
      tau_.clear();
      return ok;
    };
    if (!reproduces(kept))
      fatal("ground_conflict: delta does not reproduce under sigma");
    for (size_t i = 0; i < kept.size();) {
      std::vector<std::pair<VarNum, TermId>> without = kept;
      without.erase(without.begin() + i);
      if (reproduces(without)) {
        kept = std::move(without);
      } else {
        ++i;
      }
    }
    for (auto [v, t] : kept) reason.push_back(bind_atom(v, t));
  }
  return reason;
}

Reason Explainer::explain_open_branch(Tableau& tableau, PosId goal) {
  Reason reason;
  if (goal == kRootPos) return reason;
  LitId glit = tableau.node(goal).literal;
  reason.push_back(place_atom(glit, goal));
  for (PosId q = tableau.node(goal).parent; q != kRootPos; q = tableau.node(q).parent) {
    if (tableau.never_connectable(glit, tableau.node(q).literal))
      reason.push_back(no_connect_atom(q, goal));
  }
  return reason;
}

}  // namespace jumpcop
