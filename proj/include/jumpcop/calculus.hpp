#pragma once

#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "jumpcop/constraints.hpp"
#include "jumpcop/tptp.hpp"

// The clausal connection tableau calculus: tableau state, the three
// inference rules with apply/undo, regularity via disequations, trail atom
// emission, and an independent proof checker.

namespace jumpcop {

struct Inference {
  enum class Rule : uint8_t { Start, Reduce, Extend };
  Rule rule;
  PosId goal = kRootPos;
  uint32_t clause = 0;    // Start, Extend
  uint32_t lit_index = 0; // Extend, 1-based
  PosId ancestor = 0;     // Reduce
  bool operator==(const Inference&) const = default;
};

struct Node {
  enum class Status : uint8_t { Absent, Open, ClosedByConnection, Expanded };
  Status status = Status::Absent;
  LitId literal = 0;
  PosId parent = kNoPos;
  uint32_t child_count = 0;    // when Expanded
  uint32_t attached_clause = 0;
};

struct Disequation {
  PosId anc;
  PosId desc;
};

struct ApplyRecord {
  Inference inference;
  std::vector<Atom> atoms;
  size_t delta_mark = 0;  // bindings mark before the connection
  uint32_t delta_len = 0;
  std::vector<PosId> new_nodes;
  uint32_t new_diseq_count = 0;
  std::optional<PosId> closed_goal;
};

struct CalculusFailure {
  enum class Kind : uint8_t { ConnectionBlocked, RegularityBlocked, DepthBlocked };
  Kind kind;
  // ConnectionBlocked: the two literals that would not unify.
  LitId goal_lit = 0;
  LitId other_lit = 0;
  PosId other_pos = kNoPos;  // the ancestor, for reductions
  // RegularityBlocked: the falsified disequation and the literals at its
  // two positions; goal_lit and other_lit carry the connection pair whose
  // delta was rolled back. diseq_active distinguishes a disequation already
  // asserted on the trail from one the failing inference would have created
  // (whose descendant node never existed).
  Disequation diseq{};
  LitId diseq_desc_lit = 0;
  LitId diseq_anc_lit = 0;
  bool diseq_active = false;
};

using ApplyResult = std::variant<ApplyRecord, CalculusFailure>;

struct EnumeratedInferences {
  std::vector<Inference> inferences;
  // extensions existed but were suppressed because the goal sits at the
  // depth limit
  bool depth_suppressed = false;
};

class Tableau {
 public:
  explicit Tableau(Problem& problem);

  // For the root: Start per start clause, in order. Otherwise reductions
  // nearest-ancestor-first, then extensions in input clause / literal order.
  // Candidates that can never connect are not enumerated; their
  // impossibility is recorded on the trail as NoConnect atoms at placement.
  EnumeratedInferences enumerate_inferences(PosId goal, uint32_t limit,
                                            std::span<const uint32_t> start_clauses);

  ApplyResult try_apply(const Inference& j, uint32_t limit);
  void undo_apply(const ApplyRecord& record);

  bool closed() const { return root_expanded_ && open_.empty(); }
  bool empty() const { return !root_expanded_; }
  // leftmost open leaf in tree order (the deepest goal of the current
  // depth-first line); root position when the tableau is empty
  PosId select_goal() const;
  bool has_open() const { return !open_.empty(); }

  const Bindings& bindings() const { return bindings_; }
  Bindings& bindings() { return bindings_; }
  const Node& node(PosId p) const { return nodes_[p]; }
  bool node_exists(PosId p) const {
    return p < nodes_.size() && nodes_[p].status != Node::Status::Absent;
  }
  std::span<const Disequation> active_diseqs() const { return diseqs_; }
  Problem& problem() { return problem_; }
  const Problem& problem() const { return problem_; }
  Context& ctx() { return problem_.ctx; }

  // never_unifiable over the problem context, memoized
  bool never_connectable(LitId l1, LitId l2);

  const std::vector<LitId>& instance(uint32_t clause, PosId at);

  // open leaves in tree order
  std::vector<PosId> open_leaves() const { return {open_.begin(), open_.end()}; }

  uint64_t state_hash() const;

 private:
  struct LexLess {
    const PositionTable* positions;
    bool operator()(PosId a, PosId b) const { return positions->lex_less(a, b); }
  };

  Node& node_mut(PosId p);
  void place_clause(PosId at, uint32_t clause_index, const std::vector<LitId>& lits,
                    uint32_t connected_index, ApplyRecord& record);
  bool falsified_diseq(const Disequation& d) const;
  std::span<const TermId> diseq_args(PosId p) const;

  Problem& problem_;
  std::vector<Node> nodes_;
  Bindings bindings_;
  std::vector<Disequation> diseqs_;
  std::set<PosId, LexLess> open_;
  bool root_expanded_ = false;
  uint32_t root_clause_ = 0;
  uint32_t root_child_count_ = 0;

  Bindings scratch_;
  std::unordered_map<uint64_t, bool> never_cache_;
  std::unordered_map<uint64_t, std::vector<LitId>> instance_cache_;
  // (predicate, polarity) -> (clause, 1-based literal index) in input order
  std::unordered_map<uint64_t, std::vector<std::pair<uint32_t, uint32_t>>> connection_index_;
};

struct Proof {
  std::vector<Inference> steps;
  std::vector<std::pair<VarNum, TermId>> final_bindings;
};

struct CheckResult {
  bool ok = false;
  size_t failed_step = 0;  // meaningful when !ok; steps.size() = final-state check
  std::string message;
  explicit operator bool() const { return ok; }
};

// Replays the steps through a minimal rule checker that is independent of
// the search and trail machinery: each step must be rule-legal, connections
// must unify, regularity must hold on every branch, branch lengths must stay
// within the limit, and the final tableau must be closed.
CheckResult check_proof(Problem& problem, const Proof& proof, uint32_t limit);

// One line per step, then the triangular bindings. Stable format:
//   1. start goal=e clause=c1
//   2. extension goal=1 clause=c2 lit=1
//   3. reduction goal=1.2.2 ancestor=1
//   bindings:
//   x@1/0 -> c
std::string format_proof(const Problem& problem, const Proof& proof);
std::optional<Proof> parse_proof(Problem& problem, const std::string& text);

}  // namespace jumpcop
