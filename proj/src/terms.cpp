#include "jumpcop/terms.hpp"

#include <algorithm>
#include <charconv>

namespace jumpcop {

namespace {

uint64_t mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

std::optional<SymbolId> SymbolTable::find(const std::string& name, SymbolKind kind) const {
  const auto& map = by_name_[static_cast<int>(kind)];
  auto it = map.find(name);
  if (it == map.end()) return std::nullopt;
  return it->second;
}

SymbolId SymbolTable::intern(const std::string& name, uint32_t arity, SymbolKind kind) {
  auto& map = by_name_[static_cast<int>(kind)];
  auto it = map.find(name);
  if (it != map.end()) {
    assert(symbols_[it->second].arity == arity);
    return it->second;
  }
  SymbolId id = static_cast<SymbolId>(symbols_.size());
  symbols_.push_back(Symbol{name, arity, kind});
  map.emplace(name, id);
  return id;
}

PositionTable::PositionTable() {
  entries_.push_back(Entry{kNoPos, 0, 0, 0});
}

PosId PositionTable::child(PosId parent, uint32_t index) {
  assert(index >= 1);
  uint64_t key = (static_cast<uint64_t>(parent) << 32) | index;
  auto it = children_.find(key);
  if (it != children_.end()) return it->second;
  PosId id = static_cast<PosId>(entries_.size());
  uint32_t begin = static_cast<uint32_t>(paths_.size());
  auto pp = path(parent);
  paths_.insert(paths_.end(), pp.begin(), pp.end());
  paths_.push_back(index);
  entries_.push_back(Entry{parent, index, entries_[parent].depth + 1, begin});
  children_.emplace(key, id);
  return id;
}

std::optional<PosId> PositionTable::find_child(PosId parent, uint32_t index) const {
  uint64_t key = (static_cast<uint64_t>(parent) << 32) | index;
  auto it = children_.find(key);
  if (it == children_.end()) return std::nullopt;
  return it->second;
}

std::span<const uint32_t> PositionTable::path(PosId p) const {
  const Entry& e = entries_[p];
  return std::span<const uint32_t>(paths_.data() + e.path_begin, e.depth);
}

bool PositionTable::lex_less(PosId a, PosId b) const {
  auto pa = path(a), pb = path(b);
  return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
}

bool PositionTable::is_strict_ancestor(PosId anc, PosId desc) const {
  if (depth(anc) >= depth(desc)) return false;
  PosId p = desc;
  while (depth(p) > depth(anc)) p = parent(p);
  return p == anc;
}

std::string PositionTable::to_string(PosId p) const {
  if (p == kRootPos) return "e";
  std::string out;
  for (uint32_t i : path(p)) {
    if (!out.empty()) out.push_back('.');
    out += std::to_string(i);
  }
  return out;
}

std::optional<PosId> PositionTable::parse(const std::string& s) const {
  if (s == "e") return kRootPos;
  PosId p = kRootPos;
  const char* it = s.data();
  const char* end = s.data() + s.size();
  while (it != end) {
    uint32_t idx = 0;
    auto [next, ec] = std::from_chars(it, end, idx);
    if (ec != std::errc() || idx == 0) return std::nullopt;
    auto c = find_child(p, idx);
    if (!c) return std::nullopt;
    p = *c;
    it = next;
    if (it != end) {
      if (*it != '.') return std::nullopt;
      ++it;
      if (it == end) return std::nullopt;
    }
  }
  return p;
}

TermId TermTable::var(PosId pos, uint32_t index) {
  uint64_t key = (static_cast<uint64_t>(pos) << 32) | index;
  auto it = var_index_.find(key);
  if (it != var_index_.end()) return it->second;
  TermId id = static_cast<TermId>(nodes_.size());
  VarNum num = static_cast<VarNum>(var_terms_.size());
  nodes_.push_back(TermNode{true, 0, pos, index, num});
  var_terms_.push_back(id);
  var_index_.emplace(key, id);
  return id;
}

uint64_t TermTable::app_hash(SymbolId sym, std::span<const TermId> args) const {
  uint64_t h = mix(0x243f6a8885a308d3ull, sym);
  for (TermId a : args) h = mix(h, a);
  return h;
}

TermId TermTable::app(SymbolId sym, std::span<const TermId> args) {
  uint64_t h = app_hash(sym, args);
  auto& bucket = app_index_[h];
  for (TermId cand : bucket) {
    const TermNode& n = nodes_[cand];
    if (n.sym != sym || n.b != args.size()) continue;
    if (std::equal(args.begin(), args.end(), args_.begin() + n.a)) return cand;
  }
  TermId id = static_cast<TermId>(nodes_.size());
  uint32_t begin = static_cast<uint32_t>(args_.size());
  args_.insert(args_.end(), args.begin(), args.end());
  nodes_.push_back(TermNode{false, sym, begin, static_cast<uint32_t>(args.size()), 0});
  bucket.push_back(id);
  return id;
}

VariableId TermTable::var_id(TermId t) const {
  const TermNode& n = nodes_[t];
  assert(n.var);
  return VariableId{n.a, n.b};
}

std::span<const TermId> TermTable::app_args(TermId t) const {
  const TermNode& n = nodes_[t];
  assert(!n.var);
  return std::span<const TermId>(args_.data() + n.a, n.b);
}

uint64_t TermTable::lit_hash(bool positive, SymbolId pred, std::span<const TermId> args) const {
  uint64_t h = mix(positive ? 0x13198a2e03707344ull : 0xa4093822299f31d0ull, pred);
  for (TermId a : args) h = mix(h, a);
  return h;
}

LitId TermTable::lit(bool positive, SymbolId pred, std::span<const TermId> args) {
  uint64_t h = lit_hash(positive, pred, args);
  auto& bucket = lit_index_[h];
  for (LitId cand : bucket) {
    const LitNode& n = lits_[cand];
    if (n.positive != positive || n.pred != pred || n.args_len != args.size()) continue;
    if (std::equal(args.begin(), args.end(), args_.begin() + n.args_begin)) return cand;
  }
  LitId id = static_cast<LitId>(lits_.size());
  uint32_t begin = static_cast<uint32_t>(args_.size());
  args_.insert(args_.end(), args.begin(), args.end());
  lits_.push_back(LitNode{positive, pred, begin, static_cast<uint32_t>(args.size())});
  bucket.push_back(id);
  return id;
}

std::span<const TermId> TermTable::lit_args(LitId l) const {
  const LitNode& n = lits_[l];
  return std::span<const TermId>(args_.data() + n.args_begin, n.args_len);
}

LitId TermTable::lit_complement(LitId l) {
  const LitNode n = lits_[l];
  std::vector<TermId> args(args_.begin() + n.args_begin, args_.begin() + n.args_begin + n.args_len);
  return lit(!n.positive, n.pred, args);
}

void Bindings::ensure(size_t var_count) {
  if (value_.size() < var_count) value_.resize(var_count, kUnbound);
}

void Bindings::bind(VarNum v, TermId t) {
  if (v >= value_.size()) value_.resize(v + 1, kUnbound);
  assert(value_[v] == kUnbound);
  value_[v] = t;
  order_.push_back(v);
}

void Bindings::undo_to(size_t mark) {
  assert(mark <= order_.size());
  while (order_.size() > mark) {
    value_[order_.back()] = kUnbound;
    order_.pop_back();
  }
}

std::span<const VarNum> Bindings::bound_since(size_t mark) const {
  return std::span<const VarNum>(order_.data() + mark, order_.size() - mark);
}

uint64_t Bindings::state_hash() const {
  uint64_t h = 0x452821e638d01377ull;
  for (VarNum v : order_) {
    h = mix(h, v);
    h = mix(h, value_[v]);
  }
  return h;
}

TermId walk(const TermTable& tt, const Bindings& b, TermId t) {
  while (tt.is_var(t)) {
    VarNum v = tt.var_num(t);
    if (!b.is_bound(v)) return t;
    t = b.value(v);
  }
  return t;
}

namespace {

bool occurs(const TermTable& tt, const Bindings& b, VarNum v, TermId t) {
  t = walk(tt, b, t);
  if (tt.is_var(t)) return tt.var_num(t) == v;
  for (TermId a : tt.app_args(t))
    if (occurs(tt, b, v, a)) return true;
  return false;
}

UnifyError unify_rec(const TermTable& tt, Bindings& b, TermId lhs, TermId rhs) {
  lhs = walk(tt, b, lhs);
  rhs = walk(tt, b, rhs);
  if (lhs == rhs) return UnifyError::None;
  if (tt.is_var(lhs)) {
    if (occurs(tt, b, tt.var_num(lhs), rhs)) return UnifyError::Occurs;
    b.bind(tt.var_num(lhs), rhs);
    return UnifyError::None;
  }
  if (tt.is_var(rhs)) {
    if (occurs(tt, b, tt.var_num(rhs), lhs)) return UnifyError::Occurs;
    b.bind(tt.var_num(rhs), lhs);
    return UnifyError::None;
  }
  if (tt.app_sym(lhs) != tt.app_sym(rhs)) return UnifyError::Clash;
  auto la = tt.app_args(lhs), ra = tt.app_args(rhs);
  for (size_t i = 0; i < la.size(); ++i) {
    UnifyError e = unify_rec(tt, b, la[i], ra[i]);
    if (e != UnifyError::None) return e;
  }
  return UnifyError::None;
}

}  // namespace

UnifyError unify_terms(const TermTable& tt, Bindings& b, TermId lhs, TermId rhs) {
  size_t m = b.mark();
  UnifyError e = unify_rec(tt, b, lhs, rhs);
  if (e != UnifyError::None) b.undo_to(m);
  return e;
}

UnifyError unify_tuples(const TermTable& tt, Bindings& b, std::span<const TermId> lhs,
                        std::span<const TermId> rhs) {
  assert(lhs.size() == rhs.size());
  size_t m = b.mark();
  for (size_t i = 0; i < lhs.size(); ++i) {
    UnifyError e = unify_rec(tt, b, lhs[i], rhs[i]);
    if (e != UnifyError::None) {
      b.undo_to(m);
      return e;
    }
  }
  return UnifyError::None;
}

namespace {

bool equal_rec(const TermTable& tt, const Bindings& b, TermId lhs, TermId rhs) {
  lhs = walk(tt, b, lhs);
  rhs = walk(tt, b, rhs);
  if (lhs == rhs) return true;
  if (tt.is_var(lhs) || tt.is_var(rhs)) return false;
  if (tt.app_sym(lhs) != tt.app_sym(rhs)) return false;
  auto la = tt.app_args(lhs), ra = tt.app_args(rhs);
  for (size_t i = 0; i < la.size(); ++i)
    if (!equal_rec(tt, b, la[i], ra[i])) return false;
  return true;
}

}  // namespace

bool equal_under(const TermTable& tt, const Bindings& b, std::span<const TermId> lhs,
                 std::span<const TermId> rhs) {
  assert(lhs.size() == rhs.size());
  for (size_t i = 0; i < lhs.size(); ++i)
    if (!equal_rec(tt, b, lhs[i], rhs[i])) return false;
  return true;
}

bool never_unifiable(const TermTable& tt, Bindings& scratch, LitId l1, LitId l2) {
  if (tt.lit_positive(l1) == tt.lit_positive(l2)) return true;
  if (tt.lit_pred(l1) != tt.lit_pred(l2)) return true;
  scratch.clear();
  UnifyError e = unify_tuples(tt, scratch, tt.lit_args(l1), tt.lit_args(l2));
  scratch.clear();
  return e != UnifyError::None;
}

std::string Context::show_term(TermId t) const {
  if (terms.is_var(t)) return show_var(terms.var_num(t));
  const Symbol& s = symbols.get(terms.app_sym(t));
  std::string out = s.name;
  auto args = terms.app_args(t);
  if (!args.empty()) {
    out.push_back('(');
    for (size_t i = 0; i < args.size(); ++i) {
      if (i) out.push_back(',');
      out += show_term(args[i]);
    }
    out.push_back(')');
  }
  return out;
}

std::string Context::show_lit(LitId l) const {
  std::string out = terms.lit_positive(l) ? "" : "~";
  out += symbols.get(terms.lit_pred(l)).name;
  auto args = terms.lit_args(l);
  if (!args.empty()) {
    out.push_back('(');
    for (size_t i = 0; i < args.size(); ++i) {
      if (i) out.push_back(',');
      out += show_term(args[i]);
    }
    out.push_back(')');
  }
  return out;
}

std::string Context::show_var(VarNum v) const {
  VariableId id = terms.var_id(terms.var_term(v));
  std::string out = "x@";
  out += id.pos == kNoPos ? "_" : positions.to_string(id.pos);
  out += "/" + std::to_string(id.index);
  return out;
}

std::string Context::show_clause(const Clause& c) const {
  std::string out;
  for (size_t i = 0; i < c.literals.size(); ++i) {
    if (i) out += " | ";
    out += show_lit(c.literals[i]);
  }
  return out;
}

TermId instantiate_term(Context& ctx, TermId t, PosId at) {
  TermTable& tt = ctx.terms;
  if (tt.is_var(t)) {
    VariableId id = tt.var_id(t);
    assert(id.pos == kNoPos);
    return tt.var(at, id.index);
  }
  auto args = tt.app_args(t);
  if (args.empty()) return t;
  std::vector<TermId> out(args.size());
  for (size_t i = 0; i < args.size(); ++i) out[i] = instantiate_term(ctx, args[i], at);
  return tt.app(tt.app_sym(t), out);
}

LitId instantiate_lit(Context& ctx, LitId l, PosId at) {
  TermTable& tt = ctx.terms;
  // copy before instantiating: interning may reallocate the arena the
  // lit_args span points into
  auto args = tt.lit_args(l);
  std::vector<TermId> out(args.begin(), args.end());
  for (TermId& a : out) a = instantiate_term(ctx, a, at);
  return tt.lit(tt.lit_positive(l), tt.lit_pred(l), out);
}

std::vector<LitId> instantiate_clause(Context& ctx, const Clause& clause, PosId at) {
  std::vector<LitId> out;
  out.reserve(clause.literals.size());
  for (LitId l : clause.literals) out.push_back(instantiate_lit(ctx, l, at));
  return out;
}

}  // namespace jumpcop
