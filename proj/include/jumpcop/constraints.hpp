#pragma once

#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "jumpcop/terms.hpp"

// The refined constraint language: trail atoms, frames, and the learned
// constraint store with one watched atom per constraint. Atoms are plain
// 64-bit values so the trail membership set and the watch index stay cheap.

namespace jumpcop {

enum class AtomKind : uint8_t { Place, Bind, NoConnect, Diseq };

struct Atom {
  uint64_t bits;

  AtomKind kind() const { return static_cast<AtomKind>(bits >> 62); }
  uint32_t a() const { return static_cast<uint32_t>((bits >> 31) & 0x7fffffffu); }
  uint32_t b() const { return static_cast<uint32_t>(bits & 0x7fffffffu); }
  bool operator==(const Atom&) const = default;
  bool operator<(const Atom& o) const { return bits < o.bits; }
};

inline Atom make_atom(AtomKind k, uint32_t a, uint32_t b) {
  return Atom{(static_cast<uint64_t>(k) << 62) | (static_cast<uint64_t>(a & 0x7fffffffu) << 31) |
              (b & 0x7fffffffu)};
}

// Place atoms store the unsubstituted, position-named literal, so the same
// tableau content yields the same atom whatever the derivation order.
inline Atom place_atom(LitId lit, PosId pos) { return make_atom(AtomKind::Place, lit, pos); }
inline Atom bind_atom(VarNum var, TermId term) { return make_atom(AtomKind::Bind, var, term); }
// NoConnect and Diseq are keyed by (ancestor, descendant).
inline Atom no_connect_atom(PosId anc, PosId desc) {
  return make_atom(AtomKind::NoConnect, anc, desc);
}
inline Atom diseq_atom(PosId anc, PosId desc) { return make_atom(AtomKind::Diseq, anc, desc); }

struct AtomHash {
  size_t operator()(const Atom& a) const { return std::hash<uint64_t>()(a.bits); }
};

std::string show_atom(const Context& ctx, Atom a);

// One frame per applied inference. Inference is kept opaque here; the search
// carries the matching undo information separately.
struct InferenceRef {
  uint32_t id;  // index into the search's record stack
};

struct Frame {
  InferenceRef inference;
  std::vector<Atom> atoms;
};

class Trail {
 public:
  void commit(Frame frame);
  Frame pop();
  bool contains(Atom a) const { return membership_.count(a) != 0; }
  size_t size() const { return frames_.size(); }
  bool empty() const { return frames_.empty(); }
  const Frame& frame(size_t i) const { return frames_[i]; }
  size_t atom_count() const { return membership_.size(); }
  std::vector<Atom> membership_snapshot() const;

 private:
  std::vector<Frame> frames_;
  std::unordered_set<Atom, AtomHash> membership_;
};

// Direct subset test; the oracle for the watch scheme and the backjump
// loop's termination check. The empty set is violated by every trail.
bool is_violated_naive(const Trail& trail, std::span<const Atom> atoms);

struct Constraint {
  std::vector<Atom> atoms;  // sorted, deduplicated
  uint32_t watch = 0;       // index into atoms
};

// Learned constraints for one iterative-deepening level. Constraints are
// never removed; a level ends when the empty constraint arrives.
class ConstraintStore {
 public:
  // Every stored constraint whose atoms all lie in trail ∪ tentative,
  // found by watch propagation. Does not mutate the trail. Watches of
  // non-returned constraints are repaired to atoms outside trail ∪ tentative.
  void check_conflicts(const Trail& trail, std::span<const Atom> tentative,
                       std::vector<uint32_t>& out);

  // Pre: not violated by the current trail (callers add after backjumping).
  // The empty constraint marks the level as exhausted.
  uint32_t add(std::vector<Atom> atoms, const Trail& trail);

  // The conflict adding the fewest atoms beyond tentative and learn_so_far;
  // ties go to the earliest-learned constraint.
  uint32_t select_conflict(std::span<const uint32_t> conflicts, std::span<const Atom> tentative,
                           const std::unordered_set<Atom, AtomHash>& learn_so_far) const;

  const Constraint& get(uint32_t id) const { return constraints_[id]; }
  size_t size() const { return constraints_.size(); }
  bool exhausted() const { return exhausted_; }
  bool is_violated_naive(uint32_t id, const Trail& trail) const;

 private:
  std::vector<Constraint> constraints_;
  std::unordered_map<Atom, std::vector<uint32_t>, AtomHash> watchers_;
  bool exhausted_ = false;
};

}  // namespace jumpcop
