// Acceptance suite: end-to-end checks at desk scale. Each criterion prints
// one PASS/FAIL line; the process exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>
#include <sstream>

#include "helpers.hpp"
#include "jumpcop/cli.hpp"
#include "jumpcop/search.hpp"

using namespace jumpcop;
namespace fs = std::filesystem;

namespace {

const std::string kProblemDir = JUMPCOP_PROBLEM_DIR;
const std::string kTptpRoot = kProblemDir + "/tptp";
const std::string kPuz005 = kTptpRoot + "/Problems/PUZ/PUZ005-1.p";

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s — %s\n", criterion, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

Problem load(const std::string& path) {
  ParseResult r = parse_problem(path, kTptpRoot);
  if (auto* diag = std::get_if<ParseDiagnostic>(&r))
    throw std::runtime_error(diag->to_string());
  return std::move(std::get<Problem>(r));
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// 1. PUZ005-1 end-to-end: levels 1-7 exhaust by learning the empty
// constraint with extensions suppressed by the bound, depth 8 closes, and
// the emitted proof passes the independent checker. Budget: 120 s.
void criterion_1() {
  auto start = Clock::now();
  auto deadline = start + std::chrono::seconds(120);
  std::ostringstream detail;
  bool ok = true;

  for (uint32_t limit = 1; limit <= 7 && ok; ++limit) {
    Problem p = load(kPuz005);
    bool last_was_empty = false;
    SearchOptions options;
    options.on_learn = [&](uint32_t, std::span<const Atom> atoms) {
      last_was_empty = atoms.empty();
    };
    LevelResult r = run_level(p, limit, options, deadline);
    if (r.kind != LevelResult::Kind::Exhausted || !r.limit_hit || !last_was_empty) {
      ok = false;
      detail << "level " << limit << " did not exhaust against the bound; ";
    }
  }

  Problem p = load(kPuz005);
  SearchOptions options;
  options.time_budget_s = 120.0 - seconds_since(start);
  Outcome o = prove(p, options);
  if (o.kind != Outcome::Kind::Theorem || o.depth != 8) {
    ok = false;
    detail << "expected Theorem at depth 8, got " << outcome_szs(o.kind) << " at depth "
           << o.depth << "; ";
  } else {
    CheckResult check = check_proof(p, *o.proof, o.depth);
    if (!check.ok) {
      ok = false;
      detail << "proof rejected: " << check.message << "; ";
    }
  }
  detail << "elapsed " << seconds_since(start) << " s";
  report(1, ok, detail.str());
}

// 2. Backtracking reduction at depth 7: learning-mode extensions_applied at
// most 1,000,000 and at most a tenth of the chronological count on the same
// build; the chronological run is capped at 30 minutes.
void criterion_2() {
  std::ostringstream detail;

  Problem learn_p = load(kPuz005);
  SearchOptions lo;
  LevelResult lr = run_level(learn_p, 7, lo);
  bool learning_finished = lr.kind == LevelResult::Kind::Exhausted;
  uint64_t learning_ext = lr.stats.extensions_applied;

  Problem chrono_p = load(kPuz005);
  SearchOptions co;
  co.mode = SearchMode::Chronological;
  auto cap = Clock::now() + std::chrono::minutes(30);
  LevelResult cr = run_level(chrono_p, 7, co, cap);
  bool chrono_finished = cr.kind == LevelResult::Kind::Exhausted;
  uint64_t chrono_ext = cr.stats.extensions_applied;

  bool ok = learning_finished && learning_ext <= 1000000;
  if (chrono_finished) {
    ok = ok && learning_ext * 10 <= chrono_ext;
    detail << "learning " << learning_ext << " vs chronological " << chrono_ext
           << " extension steps (ratio " << (learning_ext ? double(chrono_ext) / learning_ext : 0)
           << ")";
  } else {
    detail << "chronological capped at 30 min with " << chrono_ext
           << " extension steps; learning finished with " << learning_ext;
  }
  report(2, ok, detail.str());
}

// 3 and 4. Completeness oracle over random problems, plus the closed-
// tableau subset check for the learned constraints.
void criteria_3_and_4() {
  auto start = Clock::now();
  std::mt19937 rng(20250810);
  int problems_run = 0, disagreements = 0, subset_violations = 0, tableaux_checked = 0;

  while (problems_run < 500) {
    Problem generated = jumpcop::testing::random_problem(rng);
    if (generated.clauses.empty()) continue;
    ++problems_run;
    std::string source = print_problem(generated);

    for (uint32_t limit = 1; limit <= 4; ++limit) {
      ParseResult pr1 = parse_problem_string(source);
      ParseResult pr2 = parse_problem_string(source);
      ParseResult pr3 = parse_problem_string(source);
      Problem learn_copy = std::move(std::get<Problem>(pr1));
      Problem chrono_copy = std::move(std::get<Problem>(pr2));
      Problem enum_copy = std::move(std::get<Problem>(pr3));

      std::vector<std::vector<Atom>> learned;
      SearchOptions lo;
      lo.start = StartPolicy::All;
      lo.on_learn = [&](uint32_t, std::span<const Atom> atoms) {
        learned.emplace_back(atoms.begin(), atoms.end());
      };
      LevelResult lr = run_level(learn_copy, limit, lo);

      SearchOptions co;
      co.start = StartPolicy::All;
      co.mode = SearchMode::Chronological;
      LevelResult cr = run_level(chrono_copy, limit, co);

      if ((lr.kind == LevelResult::Kind::Closed) != (cr.kind == LevelResult::Kind::Closed))
        ++disagreements;

      auto tableaux = enumerate_closed_tableaux(enum_copy, limit, 20);
      if (!tableaux.empty() && tableaux.size() < 20) {
        ++tableaux_checked;
        for (const auto& constraint : learned)
          for (const auto& atoms : tableaux)
            if (std::includes(atoms.begin(), atoms.end(), constraint.begin(), constraint.end())) {
              ++subset_violations;
              std::printf("criterion 4 violation at limit %u in:\n%s  constraint:", limit,
                          source.c_str());
              for (Atom a : constraint)
                std::printf(" %s", show_atom(learn_copy.ctx, a).c_str());
              std::printf("\n");
            }
      }
    }
  }

  double elapsed = seconds_since(start);
  std::ostringstream d3;
  d3 << problems_run << " problems x 4 limits, " << disagreements << " disagreements, "
     << elapsed << " s";
  report(3, disagreements == 0 && elapsed < 300.0, d3.str());

  std::ostringstream d4;
  d4 << tableaux_checked << " problem-limit pairs enumerated, " << subset_violations
     << " constraint-subset violations";
  report(4, subset_violations == 0 && tableaux_checked > 0, d4.str());
}

// 5. The running-example fixture and the reduction scenario learn exactly
// the constraints worked out in the dead-end analysis.
void criterion_5() {
  std::ostringstream detail;
  bool ok = true;

  {
    Problem p = jumpcop::testing::parse(jumpcop::testing::kRunning);
    std::vector<std::string> first;
    SearchOptions options;
    options.start = StartPolicy::All;
    options.on_learn = [&](uint32_t, std::span<const Atom> atoms) {
      if (first.empty())
        for (Atom a : atoms) first.push_back(show_atom(p.ctx, a));
    };
    run_level(p, 3, options);
    std::sort(first.begin(), first.end());
    std::vector<std::string> expected{"r(x@e/0,x@e/1)@3", "x@e/0->c", "x@e/1->d"};
    if (first != expected) {
      ok = false;
      detail << "running-example constraint mismatch: got {";
      for (const auto& s : first) detail << s << " ";
      detail << "}; ";
    }
  }
  {
    Problem p = jumpcop::testing::parse(jumpcop::testing::kReductionScenario);
    std::vector<std::string> first;
    SearchOptions options;
    options.start = StartPolicy::All;
    options.on_learn = [&](uint32_t, std::span<const Atom> atoms) {
      if (first.empty())
        for (Atom a : atoms) first.push_back(show_atom(p.ctx, a));
    };
    run_level(p, 5, options);
    std::sort(first.begin(), first.end());
    std::vector<std::string> expected{"1.2.2.2~/~1.2.2.2.2", "1.2.2~/~1.2.2.2.2",
                                      "1.2~/~1.2.2.2.2",     "p(x@e/0)@1",
                                      "x@e/0->d",            "~p(c)@1.2.2.2.2"};
    if (first != expected) {
      ok = false;
      detail << "reduction-scenario constraint mismatch: got {";
      for (const auto& s : first) detail << s << " ";
      detail << "}";
    }
  }
  if (ok) detail << "both fixture constraints match exactly";
  report(5, ok, detail.str());
}

// 6. Explanation minimality on 1,000 randomized blocked unifications with
// at most six bindings: the subset blocks, every single-element removal
// unblocks.
void criterion_6() {
  Context ctx;
  jumpcop::testing::TermGen gen(ctx, 118999, 6);
  SymbolId P = ctx.symbols.intern("p", 3, SymbolKind::Predicate);
  std::mt19937& rng = gen.rng;
  Explainer ex(ctx);

  auto unifies_with = [&](LitId l1, LitId l2, const std::vector<std::pair<VarNum, TermId>>& s) {
    Bindings b;
    for (auto [v, t] : s) b.bind(v, t);
    return unify_tuples(ctx.terms, b, ctx.terms.lit_args(l1), ctx.terms.lit_args(l2)) ==
           UnifyError::None;
  };

  int analysed = 0, failures = 0;
  for (int round = 0; round < 300000 && analysed < 1000; ++round) {
    LitId l1 = ctx.terms.lit(true, P, std::array<TermId, 3>{gen.term(2), gen.term(2), gen.term(2)});
    LitId l2 =
        ctx.terms.lit(false, P, std::array<TermId, 3>{gen.term(2), gen.term(2), gen.term(2)});
    Bindings probe;
    if (unify_tuples(ctx.terms, probe, ctx.terms.lit_args(l1), ctx.terms.lit_args(l2)) !=
        UnifyError::None)
      continue;

    Bindings sigma;
    for (int k = 0; k < 6 && sigma.order().size() < 6; ++k) {
      TermId v = gen.vars[std::uniform_int_distribution<size_t>(0, gen.vars.size() - 1)(rng)];
      unify_terms(ctx.terms, sigma, v, gen.term(1));
    }
    size_t m = sigma.mark();
    if (unify_tuples(ctx.terms, sigma, ctx.terms.lit_args(l1), ctx.terms.lit_args(l2)) ==
        UnifyError::None) {
      sigma.undo_to(m);
      continue;
    }

    ++analysed;
    auto got = ex.minimal_blocking_bindings(l1, l2, sigma);
    if (unifies_with(l1, l2, got)) ++failures;
    for (size_t i = 0; i < got.size(); ++i) {
      auto without = got;
      without.erase(without.begin() + i);
      if (!unifies_with(l1, l2, without)) ++failures;
    }
  }

  std::ostringstream detail;
  detail << analysed << " blocked unifications analysed, " << failures << " failures";
  report(6, analysed >= 1000 && failures == 0, detail.str());
}

// 7. The watch scheme matches the naive subset oracle on 10,000 randomized
// store/trail/tentative triples.
void criterion_7() {
  std::mt19937 rng(5318008);
  auto fab = [](uint32_t i) { return make_atom(AtomKind::Place, i, i + 1); };
  int triples = 0, mismatches = 0;

  while (triples < 10000) {
    ConstraintStore store;
    Trail trail;
    uint32_t next_frame = 0;
    for (int step = 0; step < 200 && triples < 10000; ++step) {
      int action = std::uniform_int_distribution<int>(0, 9)(rng);
      if (action < 5) {
        std::vector<Atom> tentative;
        for (int k = std::uniform_int_distribution<int>(1, 3)(rng); k > 0; --k) {
          Atom a = fab(std::uniform_int_distribution<uint32_t>(0, 25)(rng));
          if (!trail.contains(a) &&
              std::find(tentative.begin(), tentative.end(), a) == tentative.end())
            tentative.push_back(a);
        }
        if (tentative.empty()) continue;
        std::vector<uint32_t> conflicts;
        store.check_conflicts(trail, tentative, conflicts);
        ++triples;

        std::vector<uint32_t> expected;
        for (uint32_t i = 0; i < store.size(); ++i) {
          const Constraint& c = store.get(i);
          if (c.atoms.empty()) continue;
          bool covered = std::all_of(c.atoms.begin(), c.atoms.end(), [&](Atom a) {
            return trail.contains(a) ||
                   std::find(tentative.begin(), tentative.end(), a) != tentative.end();
          });
          bool already = store.is_violated_naive(i, trail);
          if (covered && !already) expected.push_back(i);
        }
        std::sort(conflicts.begin(), conflicts.end());
        if (conflicts != expected) ++mismatches;
        if (conflicts.empty()) trail.commit(Frame{InferenceRef{next_frame++}, tentative});
      } else if (action < 8) {
        if (!trail.empty()) {
          trail.pop();
          --next_frame;
        }
      } else {
        std::vector<Atom> atoms;
        for (int k = std::uniform_int_distribution<int>(2, 5)(rng); k > 0; --k)
          atoms.push_back(fab(std::uniform_int_distribution<uint32_t>(0, 25)(rng)));
        std::sort(atoms.begin(), atoms.end());
        atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
        if (!is_violated_naive(trail, atoms)) store.add(atoms, trail);
      }
    }
  }

  std::ostringstream detail;
  detail << triples << " triples, " << mismatches << " mismatches";
  report(7, mismatches == 0, detail.str());
}

// 8. Soundness sweep: every bundled PUZ problem solved within 10 s yields a
// proof the independent checker accepts.
void criterion_8() {
  int solved = 0, failures = 0, attempted = 0;
  std::ostringstream detail;
  for (const auto& entry : fs::directory_iterator(kTptpRoot + "/Problems/PUZ")) {
    if (entry.path().extension() != ".p") continue;
    ++attempted;
    Problem p = load(entry.path().string());
    SearchOptions options;
    options.time_budget_s = 10.0;
    Outcome o = prove(p, options);
    if (o.kind != Outcome::Kind::Theorem) continue;
    ++solved;
    CheckResult check = check_proof(p, *o.proof, o.depth);
    if (!check.ok) {
      ++failures;
      detail << entry.path().filename().string() << ": " << check.message << "; ";
    }
  }
  detail << solved << "/" << attempted << " solved in 10 s, " << failures
         << " checker rejections";
  report(8, failures == 0 && solved > 0, detail.str());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criteria_3_and_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  return 1;
}
