#pragma once

#include <chrono>
#include <functional>
#include <optional>

#include "jumpcop/explain.hpp"

// The conflict-learning depth-first loop with backjumping, wrapped in
// iterative deepening, plus a chronological-backtracking baseline.

namespace jumpcop {

enum class SearchMode : uint8_t { Learning, Chronological };

struct SearchOptions {
  std::optional<uint32_t> max_depth;
  double time_budget_s = 10.0;
  SearchMode mode = SearchMode::Learning;
  StartPolicy start = StartPolicy::ConjectureFirst;
  // invoked for every learned constraint (learning mode)
  std::function<void(uint32_t level, std::span<const Atom>)> on_learn;
};

struct LevelStats {
  uint32_t level = 0;
  uint64_t extensions_applied = 0;  // committed extension steps
  uint64_t extensions_tried = 0;
  uint64_t reductions_applied = 0;
  uint64_t constraints_learned = 0;
  uint64_t conflicts_hit = 0;
  uint64_t max_trail_depth = 0;
  uint64_t backjump_frame_total = 0;
};

std::string stats_to_json(const LevelStats& s);

using Clock = std::chrono::steady_clock;

struct LevelResult {
  enum class Kind : uint8_t { Closed, Exhausted, TimeOut };
  Kind kind;
  // an extension was suppressed by the depth limit somewhere this level
  bool limit_hit = false;
  std::optional<Proof> proof;
  LevelStats stats;
};

// One iterative-deepening level. The constraint store is fresh per level.
LevelResult run_level(Problem& problem, uint32_t limit, const SearchOptions& options,
                      std::optional<Clock::time_point> deadline = {});

// Pops trail frames and undoes the matching records until `learn` is no
// longer violated; pops at least one frame when learn is grounded.
void backjump(Trail& trail, Tableau& tableau, std::span<const ApplyRecord> records,
              std::span<const Atom> learn, LevelStats& stats);

struct Outcome {
  enum class Kind : uint8_t { Theorem, Saturated, DepthOut, TimeOut };
  Kind kind;
  uint32_t depth = 0;  // Theorem: proof depth; Saturated: exhausted level
  std::optional<Proof> proof;
  std::vector<LevelStats> stats;
};

const char* outcome_szs(Outcome::Kind kind);

Outcome prove(Problem& problem, const SearchOptions& options);

// Every closed tableau reachable at the limit, as sorted trail atom sets,
// enumerated with the chronological engine; stops after max_count distinct
// tableaux. Test oracle: no learned constraint may be a subset of any
// closed tableau's atoms.
std::vector<std::vector<Atom>> enumerate_closed_tableaux(Problem& problem, uint32_t limit,
                                                         size_t max_count,
                                                         StartPolicy start = StartPolicy::All);

}  // namespace jumpcop
