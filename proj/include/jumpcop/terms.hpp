#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

// First-order syntax with position-named variables, plus unification over a
// triangular global substitution. Terms, literals and positions are
// hash-consed: structural equality is id equality, which keeps trail atoms
// cheap to hash and identical across derivation orders.

namespace jumpcop {

using SymbolId = uint32_t;
using PosId = uint32_t;
using TermId = uint32_t;
using LitId = uint32_t;
using VarNum = uint32_t;

constexpr PosId kRootPos = 0;
constexpr uint32_t kNoPos = 0xffffffffu;   // template variables, root's parent
constexpr TermId kNoTerm = 0xffffffffu;

enum class SymbolKind : uint8_t { Predicate, Function };

struct Symbol {
  std::string name;
  uint32_t arity;
  SymbolKind kind;
};

class SymbolTable {
 public:
  // (name, kind) is unique; arity is fixed at first sight.
  std::optional<SymbolId> find(const std::string& name, SymbolKind kind) const;
  SymbolId intern(const std::string& name, uint32_t arity, SymbolKind kind);
  const Symbol& get(SymbolId id) const { return symbols_[id]; }
  size_t size() const { return symbols_.size(); }

 private:
  std::vector<Symbol> symbols_;
  std::unordered_map<std::string, SymbolId> by_name_[2];
};

// Tableau positions: paths of positive integers, empty path = root.
class PositionTable {
 public:
  PositionTable();
  PosId child(PosId parent, uint32_t index);  // index is 1-based
  std::optional<PosId> find_child(PosId parent, uint32_t index) const;
  PosId parent(PosId p) const { return entries_[p].parent; }
  uint32_t index(PosId p) const { return entries_[p].index; }
  uint32_t depth(PosId p) const { return entries_[p].depth; }
  std::span<const uint32_t> path(PosId p) const;
  bool lex_less(PosId a, PosId b) const;
  bool is_strict_ancestor(PosId anc, PosId desc) const;
  std::string to_string(PosId p) const;  // "1.2.2", root prints as "e"
  std::optional<PosId> parse(const std::string& s) const;
  size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    PosId parent;
    uint32_t index;
    uint32_t depth;
    uint32_t path_begin;
  };
  std::vector<Entry> entries_;
  std::vector<uint32_t> paths_;
  std::unordered_map<uint64_t, PosId> children_;
};

struct VariableId {
  PosId pos;       // kNoPos for clause-template variables
  uint32_t index;  // local index within the clause
  bool operator==(const VariableId&) const = default;
};

// Hash-consed terms and literals. A term is either a variable or a compound;
// constants are compounds of arity 0.
class TermTable {
 public:
  TermId var(PosId pos, uint32_t index);
  TermId app(SymbolId sym, std::span<const TermId> args);

  bool is_var(TermId t) const { return nodes_[t].var; }
  VariableId var_id(TermId t) const;
  VarNum var_num(TermId t) const { return nodes_[t].num; }
  TermId var_term(VarNum v) const { return var_terms_[v]; }
  size_t var_count() const { return var_terms_.size(); }
  SymbolId app_sym(TermId t) const { return nodes_[t].sym; }
  std::span<const TermId> app_args(TermId t) const;

  LitId lit(bool positive, SymbolId pred, std::span<const TermId> args);
  bool lit_positive(LitId l) const { return lits_[l].positive; }
  SymbolId lit_pred(LitId l) const { return lits_[l].pred; }
  std::span<const TermId> lit_args(LitId l) const;
  LitId lit_complement(LitId l);
  size_t lit_count() const { return lits_.size(); }

 private:
  struct TermNode {
    bool var;
    SymbolId sym;     // compounds
    uint32_t a, b;    // var: (pos, index); compound: (args_begin, args_len)
    VarNum num;       // dense variable number
  };
  struct LitNode {
    bool positive;
    SymbolId pred;
    uint32_t args_begin, args_len;
  };
  std::vector<TermNode> nodes_;
  std::vector<LitNode> lits_;
  std::vector<TermId> args_;
  std::vector<TermId> var_terms_;
  std::unordered_map<uint64_t, TermId> var_index_;
  std::unordered_map<uint64_t, std::vector<TermId>> app_index_;
  std::unordered_map<uint64_t, std::vector<LitId>> lit_index_;

  uint64_t app_hash(SymbolId sym, std::span<const TermId> args) const;
  uint64_t lit_hash(bool positive, SymbolId pred, std::span<const TermId> args) const;
};

constexpr TermId kUnbound = kNoTerm;

// Triangular substitution: bound terms may themselves contain bound
// variables; lookup dereferences lazily. Binds are undone LIFO, so a delta is
// just a mark into the bind order.
class Bindings {
 public:
  void ensure(size_t var_count);
  bool is_bound(VarNum v) const { return v < value_.size() && value_[v] != kUnbound; }
  TermId value(VarNum v) const { return value_[v]; }
  void bind(VarNum v, TermId t);
  size_t mark() const { return order_.size(); }
  void undo_to(size_t mark);
  std::span<const VarNum> order() const { return order_; }
  std::span<const VarNum> bound_since(size_t mark) const;
  bool empty() const { return order_.empty(); }
  void clear() { undo_to(0); }
  uint64_t state_hash() const;

 private:
  std::vector<TermId> value_;
  std::vector<VarNum> order_;
};

enum class UnifyError : uint8_t { None, Clash, Occurs };

// Dereference a term one variable-chain step at a time until it is an
// unbound variable or a compound.
TermId walk(const TermTable& tt, const Bindings& b, TermId t);

// Unify two terms / argument tuples. On failure the bindings are restored to
// their entry state; on success the new binds form the delta. When both sides
// walk to distinct unbound variables, the left one is bound.
UnifyError unify_terms(const TermTable& tt, Bindings& b, TermId lhs, TermId rhs);
UnifyError unify_tuples(const TermTable& tt, Bindings& b, std::span<const TermId> lhs,
                        std::span<const TermId> rhs);

// True iff both tuples dereference to syntactically identical terms.
bool equal_under(const TermTable& tt, const Bindings& b, std::span<const TermId> lhs,
                 std::span<const TermId> rhs);

// True iff l1 and the complement of l2 fail to unify under the empty
// substitution, with the literals' actual variables (no renaming apart).
// `scratch` is caller-provided working space and is left cleared.
bool never_unifiable(const TermTable& tt, Bindings& scratch, LitId l1, LitId l2);

enum class ClauseRole : uint8_t { Axiom, NegatedConjecture, Other };

struct Clause {
  std::string name;
  ClauseRole role;
  std::vector<LitId> literals;  // template literals, variables have pos == kNoPos
  uint32_t var_count;
};

struct Context {
  SymbolTable symbols;
  PositionTable positions;
  TermTable terms;

  std::string show_term(TermId t) const;
  std::string show_lit(LitId l) const;
  std::string show_var(VarNum v) const;  // x@<pos>/<idx>
  std::string show_clause(const Clause& c) const;
};

// Replace each template variable i of `t` with the variable (at, i).
TermId instantiate_term(Context& ctx, TermId t, PosId at);
LitId instantiate_lit(Context& ctx, LitId l, PosId at);
// Deterministic: the same clause at the same position yields identical ids.
std::vector<LitId> instantiate_clause(Context& ctx, const Clause& clause, PosId at);

}  // namespace jumpcop
