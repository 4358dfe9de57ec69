#include "jumpcop/calculus.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace jumpcop {

namespace {

uint64_t mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

uint64_t unordered_pair_key(uint32_t a, uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<uint64_t>(a) << 32) | b;
}

}  // namespace

Tableau::Tableau(Problem& problem)
    : problem_(problem), open_(LexLess{&problem.ctx.positions}) {
  const TermTable& tt = problem_.ctx.terms;
  for (uint32_t i = 0; i < problem_.clauses.size(); ++i) {
    const Clause& c = problem_.clauses[i];
    for (uint32_t j = 0; j < c.literals.size(); ++j) {
      LitId l = c.literals[j];
      uint64_t key = (static_cast<uint64_t>(tt.lit_pred(l)) << 1) | tt.lit_positive(l);
      connection_index_[key].push_back({i, j + 1});
    }
  }
}

Node& Tableau::node_mut(PosId p) {
  if (p >= nodes_.size()) nodes_.resize(p + 1);
  return nodes_[p];
}

bool Tableau::never_connectable(LitId l1, LitId l2) {
  uint64_t key = unordered_pair_key(l1, l2);
  auto it = never_cache_.find(key);
  if (it != never_cache_.end()) return it->second;
  bool result = never_unifiable(problem_.ctx.terms, scratch_, l1, l2);
  never_cache_.emplace(key, result);
  return result;
}

const std::vector<LitId>& Tableau::instance(uint32_t clause, PosId at) {
  uint64_t key = (static_cast<uint64_t>(clause) << 32) | at;
  auto it = instance_cache_.find(key);
  if (it != instance_cache_.end()) return it->second;
  auto lits = instantiate_clause(problem_.ctx, problem_.clauses[clause], at);
  return instance_cache_.emplace(key, std::move(lits)).first->second;
}

PosId Tableau::select_goal() const {
  if (open_.empty()) return kRootPos;
  return *open_.begin();
}

EnumeratedInferences Tableau::enumerate_inferences(PosId goal, uint32_t limit,
                                                   std::span<const uint32_t> start_clauses) {
  EnumeratedInferences out;
  if (goal == kRootPos) {
    assert(!root_expanded_);
    for (uint32_t c : start_clauses)
      out.inferences.push_back(Inference{Inference::Rule::Start, kRootPos, c, 0, 0});
    return out;
  }
  assert(node_exists(goal) && nodes_[goal].status == Node::Status::Open);
  const PositionTable& positions = problem_.ctx.positions;
  LitId glit = nodes_[goal].literal;

  for (PosId q = nodes_[goal].parent; q != kRootPos; q = nodes_[q].parent) {
    if (!never_connectable(glit, nodes_[q].literal))
      out.inferences.push_back(Inference{Inference::Rule::Reduce, goal, 0, 0, q});
  }

  const TermTable& tt = problem_.ctx.terms;
  uint64_t key = (static_cast<uint64_t>(tt.lit_pred(glit)) << 1) | !tt.lit_positive(glit);
  auto it = connection_index_.find(key);
  if (it == connection_index_.end()) return out;
  bool at_limit = positions.depth(goal) >= limit;
  for (auto [clause, li] : it->second) {
    LitId cand = instance(clause, goal)[li - 1];
    if (never_connectable(glit, cand)) continue;
    if (at_limit) {
      out.depth_suppressed = true;
      continue;
    }
    out.inferences.push_back(Inference{Inference::Rule::Extend, goal, clause, li, 0});
  }
  return out;
}

std::span<const TermId> Tableau::diseq_args(PosId p) const {
  return problem_.ctx.terms.lit_args(nodes_[p].literal);
}

bool Tableau::falsified_diseq(const Disequation& d) const {
  return equal_under(problem_.ctx.terms, bindings_, diseq_args(d.desc), diseq_args(d.anc));
}

void Tableau::place_clause(PosId at, uint32_t clause_index, const std::vector<LitId>& lits,
                           uint32_t connected_index, ApplyRecord& record) {
  PositionTable& positions = problem_.ctx.positions;
  const TermTable& tt = problem_.ctx.terms;
  std::vector<Atom> no_connects;
  std::vector<Atom> new_diseqs;

  for (uint32_t k = 1; k <= lits.size(); ++k) {
    PosId child = positions.child(at, k);
    LitId lit = lits[k - 1];
    Node& n = node_mut(child);
    assert(n.status == Node::Status::Absent);
    n.status = k == connected_index ? Node::Status::ClosedByConnection : Node::Status::Open;
    n.literal = lit;
    n.parent = at;
    n.child_count = 0;
    record.new_nodes.push_back(child);
    record.atoms.push_back(place_atom(lit, child));
    if (n.status == Node::Status::Open) open_.insert(child);

    for (PosId q = at; q != kRootPos; q = nodes_[q].parent) {
      LitId qlit = nodes_[q].literal;
      if (never_connectable(lit, qlit)) {
        no_connects.push_back(no_connect_atom(q, child));
      }
      if (tt.lit_pred(qlit) == tt.lit_pred(lit) &&
          tt.lit_positive(qlit) == tt.lit_positive(lit)) {
        diseqs_.push_back(Disequation{q, child});
        new_diseqs.push_back(diseq_atom(q, child));
        ++record.new_diseq_count;
      }
    }
  }

  for (VarNum v : bindings_.bound_since(record.delta_mark))
    record.atoms.push_back(bind_atom(v, bindings_.value(v)));
  record.atoms.insert(record.atoms.end(), no_connects.begin(), no_connects.end());
  record.atoms.insert(record.atoms.end(), new_diseqs.begin(), new_diseqs.end());

  if (at == kRootPos) {
    root_expanded_ = true;
    root_clause_ = clause_index;
    root_child_count_ = static_cast<uint32_t>(lits.size());
  } else {
    Node& g = nodes_[at];
    g.status = Node::Status::Expanded;
    g.attached_clause = clause_index;
    g.child_count = static_cast<uint32_t>(lits.size());
  }
}

ApplyResult Tableau::try_apply(const Inference& j, uint32_t limit) {
  PositionTable& positions = problem_.ctx.positions;
  const TermTable& tt = problem_.ctx.terms;

  switch (j.rule) {
    case Inference::Rule::Start: {
      assert(!root_expanded_);
      ApplyRecord record;
      record.inference = j;
      record.delta_mark = bindings_.mark();
      const std::vector<LitId>& lits = instance(j.clause, kRootPos);
      place_clause(kRootPos, j.clause, lits, 0, record);
      return record;
    }

    case Inference::Rule::Reduce: {
      assert(node_exists(j.goal) && nodes_[j.goal].status == Node::Status::Open);
      assert(positions.is_strict_ancestor(j.ancestor, j.goal));
      LitId glit = nodes_[j.goal].literal;
      LitId alit = nodes_[j.ancestor].literal;
      if (tt.lit_positive(glit) == tt.lit_positive(alit) || tt.lit_pred(glit) != tt.lit_pred(alit))
        return CalculusFailure{CalculusFailure::Kind::ConnectionBlocked, glit, alit, j.ancestor};
      size_t mark = bindings_.mark();
      if (unify_tuples(tt, bindings_, tt.lit_args(alit), tt.lit_args(glit)) != UnifyError::None)
        return CalculusFailure{CalculusFailure::Kind::ConnectionBlocked, glit, alit, j.ancestor};
      for (const Disequation& d : diseqs_) {
        if (falsified_diseq(d)) {
          CalculusFailure f{CalculusFailure::Kind::RegularityBlocked, glit, alit, j.ancestor};
          f.diseq = d;
          f.diseq_desc_lit = nodes_[d.desc].literal;
          f.diseq_anc_lit = nodes_[d.anc].literal;
          f.diseq_active = true;
          bindings_.undo_to(mark);
          return f;
        }
      }
      ApplyRecord record;
      record.inference = j;
      record.delta_mark = mark;
      record.delta_len = static_cast<uint32_t>(bindings_.mark() - mark);
      for (VarNum v : bindings_.bound_since(mark))
        record.atoms.push_back(bind_atom(v, bindings_.value(v)));
      record.closed_goal = j.goal;
      nodes_[j.goal].status = Node::Status::ClosedByConnection;
      open_.erase(j.goal);
      return record;
    }

    case Inference::Rule::Extend: {
      assert(node_exists(j.goal) && nodes_[j.goal].status == Node::Status::Open);
      if (positions.depth(j.goal) >= limit)
        return CalculusFailure{CalculusFailure::Kind::DepthBlocked, nodes_[j.goal].literal};
      LitId glit = nodes_[j.goal].literal;
      const std::vector<LitId>& lits = instance(j.clause, j.goal);
      assert(j.lit_index >= 1 && j.lit_index <= lits.size());
      LitId clit = lits[j.lit_index - 1];
      if (tt.lit_positive(glit) == tt.lit_positive(clit) || tt.lit_pred(glit) != tt.lit_pred(clit))
        return CalculusFailure{CalculusFailure::Kind::ConnectionBlocked, glit, clit};
      size_t mark = bindings_.mark();
      if (unify_tuples(tt, bindings_, tt.lit_args(clit), tt.lit_args(glit)) != UnifyError::None)
        return CalculusFailure{CalculusFailure::Kind::ConnectionBlocked, glit, clit};

      // regularity: active disequations plus the pairs the new literals
      // would create
      for (const Disequation& d : diseqs_) {
        if (falsified_diseq(d)) {
          CalculusFailure f{CalculusFailure::Kind::RegularityBlocked, glit, clit};
          f.diseq = d;
          f.diseq_desc_lit = nodes_[d.desc].literal;
          f.diseq_anc_lit = nodes_[d.anc].literal;
          f.diseq_active = true;
          bindings_.undo_to(mark);
          return f;
        }
      }
      for (uint32_t k = 1; k <= lits.size(); ++k) {
        LitId lit = lits[k - 1];
        for (PosId q = j.goal; q != kRootPos; q = nodes_[q].parent) {
          LitId qlit = nodes_[q].literal;
          if (tt.lit_pred(qlit) != tt.lit_pred(lit) ||
              tt.lit_positive(qlit) != tt.lit_positive(lit))
            continue;
          if (equal_under(tt, bindings_, tt.lit_args(lit), tt.lit_args(qlit))) {
            CalculusFailure f{CalculusFailure::Kind::RegularityBlocked, glit, clit};
            f.diseq = Disequation{q, positions.child(j.goal, k)};
            f.diseq_desc_lit = lit;
            f.diseq_anc_lit = qlit;
            bindings_.undo_to(mark);
            return f;
          }
        }
      }

      ApplyRecord record;
      record.inference = j;
      record.delta_mark = mark;
      record.delta_len = static_cast<uint32_t>(bindings_.mark() - mark);
      open_.erase(j.goal);
      place_clause(j.goal, j.clause, lits, j.lit_index, record);
      return record;
    }
  }
  assert(false);
  return CalculusFailure{};
}

void Tableau::undo_apply(const ApplyRecord& record) {
  assert(bindings_.mark() == record.delta_mark + record.delta_len);
  for (PosId p : record.new_nodes) {
    Node& n = nodes_[p];
    assert(n.status != Node::Status::Absent && n.child_count == 0);
    if (n.status == Node::Status::Open) open_.erase(p);
    n.status = Node::Status::Absent;
  }
  assert(record.new_diseq_count <= diseqs_.size());
  diseqs_.resize(diseqs_.size() - record.new_diseq_count);
  bindings_.undo_to(record.delta_mark);

  switch (record.inference.rule) {
    case Inference::Rule::Start:
      root_expanded_ = false;
      root_child_count_ = 0;
      break;
    case Inference::Rule::Reduce:
      nodes_[record.inference.goal].status = Node::Status::Open;
      open_.insert(record.inference.goal);
      break;
    case Inference::Rule::Extend: {
      Node& g = nodes_[record.inference.goal];
      g.status = Node::Status::Open;
      g.child_count = 0;
      open_.insert(record.inference.goal);
      break;
    }
  }
}

uint64_t Tableau::state_hash() const {
  uint64_t h = 0xc0ffee ^ (root_expanded_ ? root_clause_ + 1 : 0);
  for (PosId p = 0; p < nodes_.size(); ++p) {
    const Node& n = nodes_[p];
    if (n.status == Node::Status::Absent) continue;
    h = mix(h, p);
    h = mix(h, static_cast<uint64_t>(n.status));
    h = mix(h, n.literal);
    h = mix(h, n.child_count);
  }
  for (const Disequation& d : diseqs_) {
    h = mix(h, d.anc);
    h = mix(h, d.desc);
  }
  for (PosId p : open_) h = mix(h, p);
  return mix(h, bindings_.state_hash());
}

// ---------------------------------------------------------------------------
// Independent proof checking

namespace {

struct CheckNode {
  LitId lit;
  PosId parent;
  uint32_t children = 0;
  bool closed_leaf = false;
};

struct Checker {
  Problem& problem;
  uint32_t limit;
  Bindings bindings;
  std::unordered_map<PosId, CheckNode> nodes;
  bool root_done = false;
  uint32_t root_children = 0;

  CheckResult fail(size_t step, const std::string& msg) { return CheckResult{false, step, msg}; }

  bool is_open_leaf(PosId p) const {
    auto it = nodes.find(p);
    return it != nodes.end() && it->second.children == 0 && !it->second.closed_leaf;
  }

  CheckResult run(const Proof& proof) {
    Context& ctx = problem.ctx;
    const TermTable& tt = ctx.terms;
    for (size_t i = 0; i < proof.steps.size(); ++i) {
      const Inference& j = proof.steps[i];
      switch (j.rule) {
        case Inference::Rule::Start: {
          if (root_done || !nodes.empty()) return fail(i, "start on a non-empty tableau");
          if (j.clause >= problem.clauses.size()) return fail(i, "unknown clause");
          auto lits = instantiate_clause(ctx, problem.clauses[j.clause], kRootPos);
          if (limit < 1) return fail(i, "branch longer than the limit");
          for (uint32_t k = 1; k <= lits.size(); ++k)
            nodes[ctx.positions.child(kRootPos, k)] = CheckNode{lits[k - 1], kRootPos};
          root_done = true;
          root_children = static_cast<uint32_t>(lits.size());
          break;
        }
        case Inference::Rule::Reduce: {
          if (!is_open_leaf(j.goal)) return fail(i, "reduction goal is not an open leaf");
          if (!ctx.positions.is_strict_ancestor(j.ancestor, j.goal))
            return fail(i, "reduction target is not a strict ancestor");
          LitId glit = nodes[j.goal].lit;
          LitId alit = nodes[j.ancestor].lit;
          if (tt.lit_positive(glit) == tt.lit_positive(alit) ||
              tt.lit_pred(glit) != tt.lit_pred(alit))
            return fail(i, "reduction literals are not complementary");
          if (unify_tuples(tt, bindings, tt.lit_args(alit), tt.lit_args(glit)) !=
              UnifyError::None)
            return fail(i, "reduction connection does not unify");
          nodes[j.goal].closed_leaf = true;
          break;
        }
        case Inference::Rule::Extend: {
          if (!is_open_leaf(j.goal)) return fail(i, "extension goal is not an open leaf");
          if (ctx.positions.depth(j.goal) >= limit)
            return fail(i, "extension exceeds the depth limit");
          if (j.clause >= problem.clauses.size()) return fail(i, "unknown clause");
          auto lits = instantiate_clause(ctx, problem.clauses[j.clause], j.goal);
          if (j.lit_index < 1 || j.lit_index > lits.size()) return fail(i, "bad literal index");
          LitId glit = nodes[j.goal].lit;
          LitId clit = lits[j.lit_index - 1];
          if (tt.lit_positive(glit) == tt.lit_positive(clit) ||
              tt.lit_pred(glit) != tt.lit_pred(clit))
            return fail(i, "extension literals are not complementary");
          if (unify_tuples(tt, bindings, tt.lit_args(clit), tt.lit_args(glit)) !=
              UnifyError::None)
            return fail(i, "extension connection does not unify");
          nodes[j.goal].children = static_cast<uint32_t>(lits.size());
          for (uint32_t k = 1; k <= lits.size(); ++k) {
            PosId child = ctx.positions.child(j.goal, k);
            nodes[child] = CheckNode{lits[k - 1], j.goal};
            if (k == j.lit_index) nodes[child].closed_leaf = true;
          }
          break;
        }
      }
    }

    size_t end = proof.steps.size();
    if (!root_done) return fail(end, "empty proof");
    for (auto& [p, n] : nodes)
      if (n.children == 0 && !n.closed_leaf)
        return fail(end, "tableau not closed: open branch at " + problem.ctx.positions.to_string(p));
    // regularity under the final bindings; equality only persists as
    // bindings grow, so the final check covers every step
    for (auto& [p, n] : nodes) {
      for (PosId q = n.parent; q != kRootPos; q = nodes.at(q).parent) {
        LitId qlit = nodes.at(q).lit;
        if (tt.lit_pred(qlit) != tt.lit_pred(n.lit) ||
            tt.lit_positive(qlit) != tt.lit_positive(n.lit))
          continue;
        if (equal_under(tt, bindings, tt.lit_args(n.lit), tt.lit_args(qlit)))
          return fail(end, "irregular branch: " + problem.ctx.positions.to_string(q) + " and " +
                               problem.ctx.positions.to_string(p));
      }
    }
    return CheckResult{true, 0, ""};
  }
};

}  // namespace

CheckResult check_proof(Problem& problem, const Proof& proof, uint32_t limit) {
  Checker checker{problem, limit, {}, {}};
  return checker.run(proof);
}

std::string format_proof(const Problem& problem, const Proof& proof) {
  const Context& ctx = problem.ctx;
  std::ostringstream os;
  for (size_t i = 0; i < proof.steps.size(); ++i) {
    const Inference& j = proof.steps[i];
    os << (i + 1) << ". ";
    switch (j.rule) {
      case Inference::Rule::Start:
        os << "start goal=" << ctx.positions.to_string(kRootPos)
           << " clause=" << problem.clauses[j.clause].name;
        break;
      case Inference::Rule::Extend:
        os << "extension goal=" << ctx.positions.to_string(j.goal)
           << " clause=" << problem.clauses[j.clause].name << " lit=" << j.lit_index;
        break;
      case Inference::Rule::Reduce:
        os << "reduction goal=" << ctx.positions.to_string(j.goal)
           << " ancestor=" << ctx.positions.to_string(j.ancestor);
        break;
    }
    os << "\n";
  }
  os << "bindings:\n";
  for (auto [v, t] : proof.final_bindings)
    os << ctx.show_var(v) << " -> " << ctx.show_term(t) << "\n";
  return os.str();
}

namespace {

std::optional<PosId> intern_position(Context& ctx, const std::string& s) {
  if (s == "e") return kRootPos;
  PosId p = kRootPos;
  const char* it = s.data();
  const char* end = s.data() + s.size();
  while (it != end) {
    uint32_t idx = 0;
    auto [next, ec] = std::from_chars(it, end, idx);
    if (ec != std::errc() || idx == 0) return std::nullopt;
    p = ctx.positions.child(p, idx);
    it = next;
    if (it != end) {
      if (*it != '.') return std::nullopt;
      ++it;
      if (it == end) return std::nullopt;
    }
  }
  return p;
}

std::optional<std::string> field(const std::string& line, const std::string& key) {
  auto at = line.find(key + "=");
  if (at == std::string::npos) return std::nullopt;
  at += key.size() + 1;
  auto end = line.find(' ', at);
  return line.substr(at, end == std::string::npos ? std::string::npos : end - at);
}

}  // namespace

std::optional<Proof> parse_proof(Problem& problem, const std::string& text) {
  std::unordered_map<std::string, uint32_t> by_name;
  for (uint32_t i = 0; i < problem.clauses.size(); ++i)
    by_name.emplace(problem.clauses[i].name, i);

  Proof proof;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line == "bindings:") break;
    auto dot = line.find(". ");
    if (dot == std::string::npos) return std::nullopt;
    std::string rest = line.substr(dot + 2);
    Inference j;
    auto goal = field(rest, "goal");
    if (!goal) return std::nullopt;
    auto gpos = intern_position(problem.ctx, *goal);
    if (!gpos) return std::nullopt;
    j.goal = *gpos;
    if (rest.rfind("start ", 0) == 0) {
      j.rule = Inference::Rule::Start;
      auto clause = field(rest, "clause");
      if (!clause || !by_name.count(*clause)) return std::nullopt;
      j.clause = by_name[*clause];
    } else if (rest.rfind("extension ", 0) == 0) {
      j.rule = Inference::Rule::Extend;
      auto clause = field(rest, "clause");
      auto lit = field(rest, "lit");
      if (!clause || !by_name.count(*clause) || !lit) return std::nullopt;
      j.clause = by_name[*clause];
      uint32_t index = 0;
      auto [end, ec] = std::from_chars(lit->data(), lit->data() + lit->size(), index);
      if (ec != std::errc() || end != lit->data() + lit->size() || index == 0)
        return std::nullopt;
      j.lit_index = index;
    } else if (rest.rfind("reduction ", 0) == 0) {
      j.rule = Inference::Rule::Reduce;
      auto anc = field(rest, "ancestor");
      if (!anc) return std::nullopt;
      auto apos = intern_position(problem.ctx, *anc);
      if (!apos) return std::nullopt;
      j.ancestor = *apos;
    } else {
      return std::nullopt;
    }
    proof.steps.push_back(j);
  }
  return proof;
}

}  // namespace jumpcop
