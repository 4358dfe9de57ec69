#pragma once

#include <vector>

#include "jumpcop/calculus.hpp"

// Reasons for failed inferences and open branches: minimal trail-atom sets
// that ground backjumping. Minimal binding subsets follow the scratch-
// substitution procedure; scan order is the binding order, oldest first.

namespace jumpcop {

using Reason = std::vector<Atom>;  // treated as a set

class Explainer {
 public:
  explicit Explainer(Context& ctx) : ctx_(ctx) {}

  // Pre: l1 and the complement of l2 unify under the empty substitution but
  // not under sigma. Returns a subset S of sigma that blocks the
  // unification; removing any single element of S permits it again.
  std::vector<std::pair<VarNum, TermId>> minimal_blocking_bindings(LitId l1, LitId l2,
                                                                   const Bindings& sigma);

  // Pre: lhs and rhs are equal under sigma extended by the delta of unifying
  // other_args with goal_args (the failing inference's own connection).
  // Returns a minimal subset S of sigma such that re-deriving the connection
  // under S alone makes lhs and rhs equal. The connection delta is re-derived
  // per candidate subset rather than replayed: its bindings depend on sigma,
  // so replaying them verbatim would let the minimisation drop exactly the
  // sigma entries they came from.
  std::vector<std::pair<VarNum, TermId>> minimal_falsifying_bindings(
      std::span<const TermId> lhs, std::span<const TermId> rhs, const Bindings& sigma,
      std::span<const TermId> other_args, std::span<const TermId> goal_args);

  Reason explain_failed_inference(Tableau& tableau, const Inference& j,
                                  const CalculusFailure& failure);

  // Trail-grounded contribution of a conflict: the constraint's atoms minus
  // the tentative record, with every subtracted atom that is not intrinsic
  // to the inference pinned by its trail-grounded cause — the ancestor's
  // place atom for NoConnect and Diseq atoms, and the sigma subset that
  // forces the connection delta to reproduce them for Bind atoms.
  Reason ground_conflict(Tableau& tableau, const ApplyRecord& record,
                         std::span<const Atom> constraint_atoms);

  // Place atom of the goal plus one NoConnect per never-connectable strict
  // ancestor; all atoms are already on the trail.
  Reason explain_open_branch(Tableau& tableau, PosId goal);

 private:
  Context& ctx_;
  Bindings tau_;
};

}  // namespace jumpcop
