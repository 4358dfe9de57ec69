#pragma once

#include <random>
#include <stdexcept>
#include <variant>

#include "jumpcop/calculus.hpp"
#include "jumpcop/tptp.hpp"

namespace jumpcop::testing {

inline Problem parse(const std::string& text) {
  ParseResult r = parse_problem_string(text);
  if (auto* diag = std::get_if<ParseDiagnostic>(&r))
    throw std::runtime_error("fixture does not parse: " + diag->to_string());
  return std::move(std::get<Problem>(r));
}

// The running example: a 4-literal clause plus six small clauses around
// predicates p, q, r, s and constants c, d with one unary function f.
inline const char* kRunning = R"(
cnf(c1, axiom, p(X) | q(Y) | r(X,Y) | p(Z)).
cnf(c2, axiom, ~p(X) | s).
cnf(c3, axiom, ~s | ~p(c)).
cnf(c4, axiom, ~q(d)).
cnf(c5, axiom, ~p(f(c))).
cnf(c6, axiom, ~r(X,c)).
cnf(c7, axiom, ~r(d,X)).
)";

inline ApplyRecord must_apply(Tableau& t, const Inference& j, uint32_t limit) {
  ApplyResult r = t.try_apply(j, limit);
  if (!std::holds_alternative<ApplyRecord>(r)) throw std::runtime_error("inference failed");
  return std::get<ApplyRecord>(std::move(r));
}

// Drives the running example to the stuck situation: the branches below Px
// and Qy are closed (x->c, y->d), Rxy at position 3 is open. With close_pz
// the Pz branch is closed too (z->f(c)), completing the figure.
inline std::vector<ApplyRecord> build_running_stuck(Tableau& t, bool close_pz,
                                                    uint32_t limit = 3) {
  PositionTable& pos = t.ctx().positions;
  std::vector<ApplyRecord> records;
  records.push_back(must_apply(t, {Inference::Rule::Start, kRootPos, 0, 0, 0}, limit));
  PosId p1 = pos.child(kRootPos, 1);
  records.push_back(must_apply(t, {Inference::Rule::Extend, p1, 1, 1, 0}, limit));
  PosId p12 = pos.child(p1, 2);
  records.push_back(must_apply(t, {Inference::Rule::Extend, p12, 2, 1, 0}, limit));
  PosId p122 = pos.child(p12, 2);
  records.push_back(must_apply(t, {Inference::Rule::Reduce, p122, 0, 0, p1}, limit));
  PosId p2 = pos.child(kRootPos, 2);
  records.push_back(must_apply(t, {Inference::Rule::Extend, p2, 3, 1, 0}, limit));
  if (close_pz) {
    PosId p4 = pos.child(kRootPos, 4);
    records.push_back(must_apply(t, {Inference::Rule::Extend, p4, 4, 1, 0}, limit));
  }
  return records;
}

// Random small problems: at most max_clauses clauses of up to 3 literals
// with up to 2 variables per clause, function depth at most 1.
inline Problem random_problem(std::mt19937& rng, int max_clauses = 6) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const char* preds[] = {"p", "q", "r"};
  const int arities[] = {1, 1, 2};
  std::string text;
  int n = pick(1, max_clauses);
  for (int ci = 0; ci < n; ++ci) {
    std::string body;
    int lits = pick(1, 3);
    for (int li = 0; li < lits; ++li) {
      if (li) body += " | ";
      if (pick(0, 3) == 0) body += "~";
      int pi = pick(0, 2);
      body += preds[pi];
      body += "(";
      for (int ai = 0; ai < arities[pi]; ++ai) {
        if (ai) body += ",";
        switch (pick(0, 4)) {
          case 0: body += "X"; break;
          case 1: body += "Y"; break;
          case 2: body += "c"; break;
          case 3: body += "d"; break;
          default: body += (pick(0, 1) ? "f(X)" : (pick(0, 1) ? "f(c)" : "f(d)")); break;
        }
      }
      body += ")";
    }
    text += "cnf(c" + std::to_string(ci) + ", axiom, " + body + ").\n";
  }
  return parse(text);
}

// Deterministic random first-order terms over a tiny vocabulary.
struct TermGen {
  Context& ctx;
  std::mt19937 rng;
  std::vector<TermId> vars;
  SymbolId c, d, f, g;

  TermGen(Context& ctx, uint32_t seed, uint32_t num_vars = 3) : ctx(ctx), rng(seed) {
    c = ctx.symbols.intern("c", 0, SymbolKind::Function);
    d = ctx.symbols.intern("d", 0, SymbolKind::Function);
    f = ctx.symbols.intern("f", 1, SymbolKind::Function);
    g = ctx.symbols.intern("g", 2, SymbolKind::Function);
    for (uint32_t i = 0; i < num_vars; ++i) vars.push_back(ctx.terms.var(kRootPos, i));
  }

  TermId term(uint32_t max_depth) {
    std::uniform_int_distribution<int> pick(0, max_depth == 0 ? 2 : 4);
    switch (pick(rng)) {
      case 0: return vars[std::uniform_int_distribution<size_t>(0, vars.size() - 1)(rng)];
      case 1: return ctx.terms.app(c, {});
      case 2: return ctx.terms.app(d, {});
      case 3: {
        TermId a = term(max_depth - 1);
        return ctx.terms.app(f, std::array<TermId, 1>{a});
      }
      default: {
        TermId a = term(max_depth - 1);
        TermId b = term(max_depth - 1);
        return ctx.terms.app(g, std::array<TermId, 2>{a, b});
      }
    }
  }
};

// The reduction-failure scenario: an open branch ~p(c) at the depth limit
// below the path p(X), q(c), r(c,d), s with X bound to d.
inline const char* kReductionScenario = R"(
cnf(k1, axiom, p(X)).
cnf(k2, axiom, ~p(d) | q(c)).
cnf(k3, axiom, ~q(Z) | r(c,d)).
cnf(k4, axiom, ~r(U,V) | s).
cnf(k5, axiom, ~s | ~p(c)).
)";

}  // namespace jumpcop::testing
