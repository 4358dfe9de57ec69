#include "jumpcop/search.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace jumpcop {

std::string stats_to_json(const LevelStats& s) {
  std::ostringstream os;
  os << "{\"level\": " << s.level << ", \"extensions_applied\": " << s.extensions_applied
     << ", \"extensions_tried\": " << s.extensions_tried
     << ", \"reductions_applied\": " << s.reductions_applied
     << ", \"constraints_learned\": " << s.constraints_learned
     << ", \"conflicts_hit\": " << s.conflicts_hit
     << ", \"max_trail_depth\": " << s.max_trail_depth
     << ", \"backjump_frame_total\": " << s.backjump_frame_total << "}";
  return os.str();
}

const char* outcome_szs(Outcome::Kind kind) {
  switch (kind) {
    case Outcome::Kind::Theorem: return "Theorem";
    case Outcome::Kind::Saturated: return "Satisfiable";
    case Outcome::Kind::DepthOut: return "GaveUp";
    case Outcome::Kind::TimeOut: return "Timeout";
  }
  return "Error";
}

void backjump(Trail& trail, Tableau& tableau, std::span<const ApplyRecord> records,
              std::span<const Atom> learn, LevelStats& stats) {
  while (!trail.empty() && is_violated_naive(trail, learn)) {
    Frame f = trail.pop();
    assert(f.inference.id == trail.size() && f.inference.id < records.size());
    tableau.undo_apply(records[f.inference.id]);
    ++stats.backjump_frame_total;
  }
  assert(!is_violated_naive(trail, learn) || learn.empty());
}

namespace {

bool out_of_time(const std::optional<Clock::time_point>& deadline) {
  return deadline && Clock::now() >= *deadline;
}

Proof extract_proof(const Tableau& tableau, std::span<const ApplyRecord> records, size_t count) {
  Proof proof;
  for (size_t i = 0; i < count; ++i) proof.steps.push_back(records[i].inference);
  const Bindings& b = tableau.bindings();
  for (VarNum v : b.order()) proof.final_bindings.push_back({v, b.value(v)});
  return proof;
}

LevelResult run_learning_level(Problem& problem, uint32_t limit, const SearchOptions& options,
                               const std::optional<Clock::time_point>& deadline) {
  Tableau tableau(problem);
  Explainer explainer(problem.ctx);
  Trail trail;
  ConstraintStore store;
  std::vector<ApplyRecord> records;
  auto starts = select_start_clauses(problem, options.start);

  LevelResult result;
  result.stats.level = limit;
  LevelStats& stats = result.stats;
  std::vector<uint32_t> conflicts;

  while (true) {
    if (out_of_time(deadline)) {
      result.kind = LevelResult::Kind::TimeOut;
      return result;
    }
    if (tableau.closed()) {
      result.kind = LevelResult::Kind::Closed;
      result.proof = extract_proof(tableau, records, trail.size());
      return result;
    }

    PosId goal = tableau.select_goal();
    Reason learn = explainer.explain_open_branch(tableau, goal);
    std::unordered_set<Atom, AtomHash> learn_set(learn.begin(), learn.end());
    auto merge = [&](std::span<const Atom> atoms, std::span<const Atom> except) {
      for (Atom a : atoms) {
        if (std::find(except.begin(), except.end(), a) != except.end()) continue;
        if (learn_set.insert(a).second) learn.push_back(a);
      }
    };

    EnumeratedInferences enumerated = tableau.enumerate_inferences(goal, limit, starts);
    result.limit_hit |= enumerated.depth_suppressed;

    bool success = false;
    for (const Inference& j : enumerated.inferences) {
      if (j.rule == Inference::Rule::Extend) ++stats.extensions_tried;
      ApplyResult attempt = tableau.try_apply(j, limit);
      if (auto* failure = std::get_if<CalculusFailure>(&attempt)) {
        Reason why = explainer.explain_failed_inference(tableau, j, *failure);
        merge(why, {});
        continue;
      }
      ApplyRecord record = std::get<ApplyRecord>(std::move(attempt));
      store.check_conflicts(trail, record.atoms, conflicts);
      if (!conflicts.empty()) {
        ++stats.conflicts_hit;
        uint32_t cid = store.select_conflict(conflicts, record.atoms, learn_set);
        Reason grounded = explainer.ground_conflict(tableau, record, store.get(cid).atoms);
        merge(grounded, {});
        tableau.undo_apply(record);
        continue;
      }
      if (j.rule == Inference::Rule::Extend) ++stats.extensions_applied;
      if (j.rule == Inference::Rule::Reduce) ++stats.reductions_applied;
      trail.commit(Frame{InferenceRef{static_cast<uint32_t>(records.size())}, record.atoms});
      records.push_back(std::move(record));
      stats.max_trail_depth = std::max<uint64_t>(stats.max_trail_depth, trail.size());
      success = true;
      break;
    }
#ifndef NDEBUG
    // no stored constraint is violated between iterations
    for (uint32_t i = 0; i < store.size(); ++i)
      assert(!store.is_violated_naive(i, trail) || store.get(i).atoms.empty());
#endif
    if (success) continue;

#ifndef NDEBUG
    for (Atom a : learn) assert(trail.contains(a));
#endif
    backjump(trail, tableau, records, learn, stats);
    records.resize(trail.size());
    std::sort(learn.begin(), learn.end());
    learn.erase(std::unique(learn.begin(), learn.end()), learn.end());
    ++stats.constraints_learned;
    if (options.on_learn) options.on_learn(limit, learn);
    store.add(std::move(learn), trail);
    if (store.exhausted()) {
      result.kind = LevelResult::Kind::Exhausted;
      return result;
    }
  }
}

struct ChronoFrame {
  ApplyRecord record;
  PosId goal;
  size_t jidx;
};

// Classical complete backtracking over the same calculus: one frame undone
// per dead end, resuming the goal's remaining alternatives.
LevelResult run_chronological_level(Problem& problem, uint32_t limit, const SearchOptions& options,
                                    const std::optional<Clock::time_point>& deadline) {
  Tableau tableau(problem);
  auto starts = select_start_clauses(problem, options.start);
  std::vector<ChronoFrame> stack;

  LevelResult result;
  result.stats.level = limit;
  LevelStats& stats = result.stats;

  // applies the first workable inference at or after jidx
  auto advance = [&](PosId goal, const EnumeratedInferences& enumerated, size_t jidx) -> bool {
    for (size_t k = jidx; k < enumerated.inferences.size(); ++k) {
      const Inference& j = enumerated.inferences[k];
      if (j.rule == Inference::Rule::Extend) ++stats.extensions_tried;
      ApplyResult attempt = tableau.try_apply(j, limit);
      if (std::holds_alternative<CalculusFailure>(attempt)) continue;
      if (j.rule == Inference::Rule::Extend) ++stats.extensions_applied;
      if (j.rule == Inference::Rule::Reduce) ++stats.reductions_applied;
      stack.push_back(ChronoFrame{std::get<ApplyRecord>(std::move(attempt)), goal, k});
      stats.max_trail_depth = std::max<uint64_t>(stats.max_trail_depth, stack.size());
      return true;
    }
    return false;
  };

  while (true) {
    if (out_of_time(deadline)) {
      result.kind = LevelResult::Kind::TimeOut;
      return result;
    }
    if (tableau.closed()) {
      result.kind = LevelResult::Kind::Closed;
      Proof proof;
      for (const ChronoFrame& f : stack) proof.steps.push_back(f.record.inference);
      const Bindings& b = tableau.bindings();
      for (VarNum v : b.order()) proof.final_bindings.push_back({v, b.value(v)});
      result.proof = std::move(proof);
      return result;
    }

    PosId goal = tableau.select_goal();
    EnumeratedInferences enumerated = tableau.enumerate_inferences(goal, limit, starts);
    result.limit_hit |= enumerated.depth_suppressed;
    if (advance(goal, enumerated, 0)) continue;

    // dead end: undo one frame at a time, trying each goal's alternatives
    bool resumed = false;
    while (!resumed) {
      if (stack.empty()) {
        result.kind = LevelResult::Kind::Exhausted;
        return result;
      }
      if (out_of_time(deadline)) {
        result.kind = LevelResult::Kind::TimeOut;
        return result;
      }
      ChronoFrame top = std::move(stack.back());
      stack.pop_back();
      tableau.undo_apply(top.record);
      ++stats.backjump_frame_total;
      EnumeratedInferences prior = tableau.enumerate_inferences(top.goal, limit, starts);
      resumed = advance(top.goal, prior, top.jidx + 1);
    }
  }
}

}  // namespace

LevelResult run_level(Problem& problem, uint32_t limit, const SearchOptions& options,
                      std::optional<Clock::time_point> deadline) {
  assert(limit >= 1);
  if (options.mode == SearchMode::Learning)
    return run_learning_level(problem, limit, options, deadline);
  return run_chronological_level(problem, limit, options, deadline);
}

Outcome prove(Problem& problem, const SearchOptions& options) {
  auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(options.time_budget_s));
  Outcome outcome;
  for (uint32_t limit = 1;; ++limit) {
    LevelResult r = run_level(problem, limit, options, deadline);
    outcome.stats.push_back(r.stats);
    switch (r.kind) {
      case LevelResult::Kind::Closed:
        outcome.kind = Outcome::Kind::Theorem;
        outcome.depth = limit;
        outcome.proof = std::move(r.proof);
        return outcome;
      case LevelResult::Kind::TimeOut:
        outcome.kind = Outcome::Kind::TimeOut;
        outcome.depth = limit;
        return outcome;
      case LevelResult::Kind::Exhausted:
        if (!r.limit_hit) {
          // nothing was ever blocked by the bound: the space is exhausted
          // at every limit
          outcome.kind = Outcome::Kind::Saturated;
          outcome.depth = limit;
          return outcome;
        }
        if (options.max_depth && limit >= *options.max_depth) {
          outcome.kind = Outcome::Kind::DepthOut;
          outcome.depth = limit;
          return outcome;
        }
        break;
    }
  }
}

std::vector<std::vector<Atom>> enumerate_closed_tableaux(Problem& problem, uint32_t limit,
                                                         size_t max_count, StartPolicy start) {
  Tableau tableau(problem);
  auto starts = select_start_clauses(problem, start);
  std::vector<ChronoFrame> stack;
  std::set<std::vector<Atom>> seen;

  auto advance = [&](PosId goal, const EnumeratedInferences& enumerated, size_t jidx) -> bool {
    for (size_t k = jidx; k < enumerated.inferences.size(); ++k) {
      ApplyResult attempt = tableau.try_apply(enumerated.inferences[k], limit);
      if (std::holds_alternative<CalculusFailure>(attempt)) continue;
      stack.push_back(ChronoFrame{std::get<ApplyRecord>(std::move(attempt)), goal, k});
      return true;
    }
    return false;
  };

  while (true) {
    bool dead_end = false;
    if (tableau.closed()) {
      std::vector<Atom> atoms;
      for (const ChronoFrame& f : stack)
        atoms.insert(atoms.end(), f.record.atoms.begin(), f.record.atoms.end());
      std::sort(atoms.begin(), atoms.end());
      seen.insert(std::move(atoms));
      if (seen.size() >= max_count) break;
      dead_end = true;  // keep searching for the next closed tableau
    } else {
      PosId goal = tableau.select_goal();
      EnumeratedInferences enumerated = tableau.enumerate_inferences(goal, limit, starts);
      dead_end = !advance(goal, enumerated, 0);
    }
    while (dead_end) {
      if (stack.empty())
        return {seen.begin(), seen.end()};
      ChronoFrame top = std::move(stack.back());
      stack.pop_back();
      tableau.undo_apply(top.record);
      EnumeratedInferences prior = tableau.enumerate_inferences(top.goal, limit, starts);
      dead_end = !advance(top.goal, prior, top.jidx + 1);
    }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace jumpcop
